//! Convex combinations of connectors with prescribed degree behaviour at a
//! chosen vertex and at the endpoints of an induced matching.

use num_traits::Zero;

use crate::cyclic::CyclicPoint;
use crate::decomp::{decompose, DecompRequest, Family, RainbowSpec};
use crate::error::{Error, Result};
use crate::graph::{check_convex_combination, connected_without, CompareMode, ConvexCombination, Multigraph};
use crate::rational::{fmt_rat, int, one, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyPSpec {
    pub v: usize,
    pub m: Vec<usize>,
    pub lambda: Rational,
}

/// Pairs of fractional edges at both endpoints of every matching edge.
pub fn matching_parts(p: &CyclicPoint, m: &[usize]) -> Vec<Vec<usize>> {
    let mut parts = Vec::new();
    for &e in m {
        let (s, t) = p.graph.edge(e);
        for u in [s, t] {
            let (f, g) = p.fractional_at(u);
            parts.push(vec![f, g]);
        }
    }
    parts
}

fn check_spec(p: &CyclicPoint, spec: &PropertyPSpec) -> Result<()> {
    if spec.v >= p.n() {
        return Err(Error::Input(format!("vertex {} out of range", spec.v)));
    }
    if spec.lambda < Rational::zero() || spec.lambda > p.theta {
        return Err(Error::Input(format!(
            "Lambda = {} outside [0, theta]",
            fmt_rat(&spec.lambda)
        )));
    }
    for &e in &spec.m {
        if e >= p.m() || !p.is_w[e] {
            return Err(Error::Input(format!("edge {e} of M is not a 1-edge")));
        }
    }
    let ev = p.e_of(spec.v);
    let (f, g) = p.fractional_at(spec.v);
    let ew1 = p.e_of(p.graph.other(f, spec.v));
    let ew2 = p.e_of(p.graph.other(g, spec.v));
    if spec.m.contains(&ev) {
        if !spec.lambda.is_zero() {
            return Err(Error::Input("e_v in M requires Lambda = 0".into()));
        }
    } else if !spec.lambda.is_zero() {
        let hits = spec.m.iter().filter(|e| **e == ew1 || **e == ew2).count();
        if hits > 1 || (ew1 == ew2 && hits == 1) {
            return Err(Error::Input(
                "M meets both fractional neighbours' 1-edges; Lambda must be 0".into(),
            ));
        }
    }
    Ok(())
}

pub fn connectors_with_p(p: &CyclicPoint, spec: &PropertyPSpec) -> Result<ConvexCombination> {
    if !p.is_cubic() {
        return Err(Error::Precondition("connectors need a cubic point".into()));
    }
    check_spec(p, spec)?;
    let v = spec.v;
    let parts = matching_parts(p, &spec.m);
    let trees = decompose(
        &p.graph,
        &DecompRequest {
            target: p.x.clone(),
            family: Family::RainbowVTree(RainbowSpec { v, parts }),
        },
    )?;
    if spec.lambda.is_zero() {
        return Ok(trees);
    }
    let (f, g) = p.fractional_at(v);
    let w1 = p.graph.other(f, v);
    let shift_f = !spec.m.contains(&p.e_of(w1));

    let (mut with_f, mut with_g): (Vec<_>, Vec<_>) = trees.terms.into_iter().partition(|(_, t)| t.contains(f));
    let take = |list: &mut Vec<(Rational, Multigraph)>| -> Vec<(Rational, Multigraph)> {
        list.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let mut need = spec.lambda.clone();
        let mut chosen = Vec::new();
        let mut rest = Vec::new();
        for (lam, t) in list.drain(..) {
            if need.is_zero() {
                rest.push((lam, t));
            } else if lam <= need {
                need -= &lam;
                chosen.push((lam, t));
            } else {
                chosen.push((need.clone(), t.clone()));
                rest.push((lam - &need, t));
                need = Rational::zero();
            }
        }
        *list = rest;
        chosen
    };
    let chosen_f = take(&mut with_f);
    let chosen_g = take(&mut with_g);
    let sum = |c: &[(Rational, Multigraph)]| c.iter().fold(Rational::zero(), |a, (l, _)| a + l);
    if sum(&chosen_f) != spec.lambda || sum(&chosen_g) != spec.lambda {
        return Err(Error::Internal("sub-family mass differs from Lambda".into()));
    }
    let edit = |t: &Multigraph, e: usize, delta: i32| {
        let mut t = t.clone();
        t.mult[e] = (t.mult[e] as i32 + delta) as u32;
        t
    };
    let mut terms: Vec<(Rational, Multigraph)> = Vec::new();
    for (lam, t) in chosen_f {
        terms.push((lam, if shift_f { edit(&t, f, -1) } else { edit(&t, g, 1) }));
    }
    for (lam, t) in chosen_g {
        terms.push((lam, if shift_f { edit(&t, f, 1) } else { edit(&t, g, -1) }));
    }
    terms.extend(with_f);
    terms.extend(with_g);
    let out = ConvexCombination::new(terms).normalized();
    check_property_p(&out, p, spec).map_err(Error::Internal)?;
    Ok(out)
}

/// Checks the three conditions of property P plus connector-ness, the
/// absence of doubled edges, W-containment and the exact value x.
pub fn check_property_p(c: &ConvexCombination, p: &CyclicPoint, spec: &PropertyPSpec) -> std::result::Result<(), String> {
    let host = &p.graph;
    check_convex_combination(c, &p.x, CompareMode::Equal).map_err(|d| d.to_string())?;
    let mut mass = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
    for (i, (lam, t)) in c.terms.iter().enumerate() {
        if t.max_mult() > 1 {
            return Err(format!("term {i} doubles an edge"));
        }
        if p.w_edges().iter().any(|&e| !t.contains(e)) {
            return Err(format!("term {i} misses a 1-edge"));
        }
        if !host.is_connected_on(|e| t.mult[e] > 0) {
            return Err(format!("term {i} is not connected"));
        }
        let d = t.degree(host, spec.v) as usize;
        if !(1..=3).contains(&d) {
            return Err(format!("term {i} has degree {d} at v"));
        }
        mass[d] += lam;
        for &e in &spec.m {
            let (s, u) = host.edge(e);
            if t.degree(host, s) != 2 || t.degree(host, u) != 2 {
                return Err(format!("term {i}: an endpoint of matching edge {e} has degree other than 2"));
            }
        }
        if !connected_without(host, t, spec.v) {
            return Err(format!("term {i} minus the edges at v is disconnected"));
        }
    }
    let rest = one() - int(2) * &spec.lambda;
    if mass[1] != spec.lambda || mass[3] != spec.lambda || mass[2] != rest {
        return Err(format!(
            "degree masses at v are ({}, {}, {}), expected ({}, {}, {})",
            fmt_rat(&mass[1]),
            fmt_rat(&mass[2]),
            fmt_rat(&mass[3]),
            fmt_rat(&spec.lambda),
            fmt_rat(&rest),
            fmt_rat(&spec.lambda)
        ));
    }
    Ok(())
}

pub fn verify_property_p(c: &ConvexCombination, p: &CyclicPoint, spec: &PropertyPSpec) -> bool {
    check_property_p(c, p, spec).is_ok()
}
