//! Cyclic points: validation, reduction to cubic support, and tight-cut
//! classification.

use std::collections::BTreeSet;

use num_traits::{One, Signed};

use crate::cuts::{complement, enumerate_cuts_upto, min_cut, side_mask};
use crate::error::{CyclicViolation, Error, Result};
use crate::graph::{contract, Contraction, EdgeVector, Graph, Multigraph};
use crate::rational::{fmt_rat, half, int, one, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPoint {
    pub theta: Rational,
    pub graph: Graph,
    pub x: EdgeVector,
    /// `is_w[e]` when x_e = 1.
    pub is_w: Vec<bool>,
}

impl CyclicPoint {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn w_edges(&self) -> Vec<usize> {
        (0..self.m()).filter(|&e| self.is_w[e]).collect()
    }

    pub fn h_edges(&self) -> Vec<usize> {
        (0..self.m()).filter(|&e| !self.is_w[e]).collect()
    }

    pub fn is_cubic(&self) -> bool {
        (0..self.n()).all(|u| self.graph.degree(u) == 3)
    }

    /// The unique 1-edge at `u` in a cubic point.
    pub fn e_of(&self, u: usize) -> usize {
        (0..self.m())
            .find(|&e| self.is_w[e] && {
                let (a, b) = self.graph.edge(e);
                a == u || b == u
            })
            .expect("every vertex has a 1-edge")
    }

    /// Fractional edges at `u`, smaller x first then smaller index: (f, g).
    pub fn fractional_at(&self, u: usize) -> (usize, usize) {
        let mut fr: Vec<usize> = (0..self.m())
            .filter(|&e| !self.is_w[e] && {
                let (a, b) = self.graph.edge(e);
                a == u || b == u
            })
            .collect();
        assert_eq!(fr.len(), 2, "vertex {u} is not cubic");
        fr.sort_by(|&a, &b| self.x.0[a].cmp(&self.x.0[b]).then(a.cmp(&b)));
        (fr[0], fr[1])
    }

    /// y with 3/2 − θ/10 on 1-edges and (3/2)x elsewhere.
    pub fn target_y(&self) -> EdgeVector {
        let w_val = Rational::new(3.into(), 2.into()) - &self.theta / int(10);
        EdgeVector(
            (0..self.m())
                .map(|e| {
                    if self.is_w[e] {
                        w_val.clone()
                    } else {
                        &self.x.0[e] * Rational::new(3.into(), 2.into())
                    }
                })
                .collect(),
        )
    }

    /// Point induced on a contraction of the host.
    pub fn contracted(&self, keep: &BTreeSet<usize>) -> Result<(CyclicPoint, Contraction)> {
        let c = contract(&self.graph, keep)?;
        let x = c.restrict(&self.x);
        let p = validate_cyclic(&self.theta, &c.graph, &x)?;
        Ok((p, c))
    }
}

/// Checks every clause of the cyclic-point definition in order.
pub fn validate_cyclic(theta: &Rational, g: &Graph, x: &EdgeVector) -> Result<CyclicPoint> {
    if x.len() != g.m() {
        return Err(Error::Input("vector length differs from edge count".into()));
    }
    if !theta.is_positive() || *theta > half() {
        return Err(CyclicViolation::Theta(fmt_rat(theta)).into());
    }
    let co = one() - theta;
    for (e, v) in x.0.iter().enumerate() {
        if *v != *theta && *v != co && !v.is_one() {
            return Err(CyclicViolation::ValueSet {
                edge: e,
                value: fmt_rat(v),
            }
            .into());
        }
    }
    let inc = g.incidence();
    for (u, es) in inc.iter().enumerate() {
        if es.len() > 3 {
            return Err(CyclicViolation::NotSubcubic(u).into());
        }
    }
    let is_w: Vec<bool> = x.0.iter().map(|v| v.is_one()).collect();
    for (u, es) in inc.iter().enumerate() {
        if !es.iter().any(|&e| is_w[e]) {
            return Err(CyclicViolation::NoOneEdge(u).into());
        }
    }
    for (u, es) in inc.iter().enumerate() {
        let s = x.sum_over(es);
        if s != int(2) {
            return Err(CyclicViolation::Degree {
                vertex: u,
                value: fmt_rat(&s),
            }
            .into());
        }
    }
    let (val, side) = min_cut(g, x);
    if val < int(2) {
        return Err(CyclicViolation::CutBelowTwo {
            side,
            value: fmt_rat(&val),
        }
        .into());
    }
    if *theta < half() {
        if let Some(u) = odd_fractional_cycle(g, &is_w) {
            return Err(CyclicViolation::OddCycle(u).into());
        }
    }
    Ok(CyclicPoint {
        theta: theta.clone(),
        graph: g.clone(),
        x: x.clone(),
        is_w,
    })
}

fn odd_fractional_cycle(g: &Graph, is_w: &[bool]) -> Option<usize> {
    let h: Vec<usize> = (0..g.m()).filter(|&e| !is_w[e]).collect();
    let (hg, _) = g.edge_subgraph(&h);
    let inc = hg.incidence();
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        if seen[s] || inc[s].is_empty() {
            continue;
        }
        let mut stack = vec![s];
        seen[s] = true;
        let (mut verts, mut edges2) = (0usize, 0usize);
        while let Some(u) = stack.pop() {
            verts += 1;
            edges2 += inc[u].len();
            for &e in &inc[u] {
                let w = hg.other(e, u);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let is_cycle = edges2 / 2 == verts;
        if is_cycle && verts % 2 == 1 {
            return Some(s);
        }
    }
    None
}

/// Cubic point obtained by contracting each maximal path of 1-edges.
#[derive(Debug, Clone)]
pub struct CubicReduction {
    pub reduced: CyclicPoint,
    /// Reduced edge index to the original edges it stands for.
    pub edge_paths: Vec<Vec<usize>>,
    /// Reduced vertex id to original vertex id.
    pub vertex_map: Vec<usize>,
    pub original_m: usize,
}

/// Contracts paths of 1-edges. Fails when no vertex has degree 3 (the
/// support is a single cycle of 1-edges).
pub fn to_cubic(p: &CyclicPoint) -> Result<CubicReduction> {
    let g = &p.graph;
    let inc = g.incidence();
    let cubic: Vec<usize> = (0..g.n()).filter(|&u| inc[u].len() == 3).collect();
    if cubic.is_empty() {
        return Err(Error::Precondition("support is a single cycle of 1-edges".into()));
    }
    let mut new_id = vec![usize::MAX; g.n()];
    for (i, &u) in cubic.iter().enumerate() {
        new_id[u] = i;
    }
    let mut assigned = vec![false; g.m()];
    let mut edges = Vec::new();
    let mut paths = Vec::new();
    let mut xs = Vec::new();
    for e in 0..g.m() {
        if assigned[e] {
            continue;
        }
        if !p.is_w[e] {
            assigned[e] = true;
            let (a, b) = g.edge(e);
            edges.push((new_id[a], new_id[b]));
            paths.push(vec![e]);
            xs.push(p.x.0[e].clone());
            continue;
        }
        // walk both directions to the cubic endpoints
        let (a, b) = g.edge(e);
        let mut path = vec![e];
        assigned[e] = true;
        let mut ends = [a, b];
        for end in ends.iter_mut() {
            let mut prev = e;
            let mut u = *end;
            while inc[u].len() == 2 {
                let next = if inc[u][0] == prev { inc[u][1] } else { inc[u][0] };
                if assigned[next] {
                    return Err(Error::Precondition("cycle of 1-edges inside the support".into()));
                }
                assigned[next] = true;
                path.push(next);
                prev = next;
                u = g.other(next, u);
            }
            *end = u;
        }
        path.sort_unstable();
        edges.push((new_id[ends[0]], new_id[ends[1]]));
        paths.push(path);
        xs.push(one());
    }
    let rg = Graph::new(cubic.len(), edges)?;
    let reduced = validate_cyclic(&p.theta, &rg, &EdgeVector(xs))?;
    Ok(CubicReduction {
        reduced,
        edge_paths: paths,
        vertex_map: cubic,
        original_m: g.m(),
    })
}

/// Substitutes each reduced 1-edge by its path at the same multiplicity.
pub fn expand_tour(r: &CubicReduction, f: &Multigraph) -> Result<Multigraph> {
    let mut out = Multigraph::empty(r.original_m);
    for (e, path) in r.edge_paths.iter().enumerate() {
        if r.reduced.is_w[e] && f.mult[e] == 0 {
            return Err(Error::Input(format!("reduced tour misses 1-edge {e}")));
        }
        for &o in path {
            out.mult[o] += f.mult[e];
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CutKind {
    Vertex,
    Critical,
    Degenerate,
    OtherTight,
    NonTight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutClass {
    pub side: Vec<usize>,
    pub kind: CutKind,
    pub value: Rational,
}

fn is_critical(p: &CyclicPoint, side: &[bool], cut: &[usize]) -> bool {
    if cut.len() != 3 || cut.iter().filter(|&&e| p.is_w[e]).count() != 1 {
        return false;
    }
    let mut inside = BTreeSet::new();
    let mut outside = BTreeSet::new();
    for &e in cut {
        let (a, b) = p.graph.edge(e);
        let (i, o) = if side[a] { (a, b) } else { (b, a) };
        inside.insert(i);
        outside.insert(o);
    }
    inside.len() == 3 && outside.len() == 3
}

fn is_degenerate(p: &CyclicPoint, side: &[bool], cut: &[usize], size: usize) -> bool {
    let n = p.n();
    if cut.len() != 3 || size <= 3 || n - size <= 3 {
        return false;
    }
    let fr: Vec<usize> = cut.iter().copied().filter(|&e| !p.is_w[e]).collect();
    if fr.len() != 2 {
        return false;
    }
    let (a1, b1) = p.graph.edge(fr[0]);
    let (a2, b2) = p.graph.edge(fr[1]);
    let end = |a: usize, b: usize, inside: bool| if side[a] == inside { a } else { b };
    end(a1, b1, true) == end(a2, b2, true) || end(a1, b1, false) == end(a2, b2, false)
}

/// Classifies vertex cuts and every proper cut crossed by at most three
/// edges, in canonical order.
pub fn classify_cuts(p: &CyclicPoint) -> Vec<CutClass> {
    let n = p.n();
    let mut out = Vec::new();
    for u in 0..n {
        let side = if u == 0 { vec![0] } else { complement(n, &[u]) };
        let cut = p.graph.cut_edges(&side_mask(n, &side));
        out.push(CutClass {
            value: p.x.sum_over(&cut),
            side,
            kind: CutKind::Vertex,
        });
    }
    for side in enumerate_cuts_upto(&p.graph, 3) {
        let mask = side_mask(n, &side);
        let cut = p.graph.cut_edges(&mask);
        let value = p.x.sum_over(&cut);
        let kind = if value != int(2) {
            CutKind::NonTight
        } else if is_critical(p, &mask, &cut) {
            CutKind::Critical
        } else if is_degenerate(p, &mask, &cut, side.len()) {
            CutKind::Degenerate
        } else {
            CutKind::OtherTight
        };
        out.push(CutClass { side, kind, value });
    }
    out
}

pub fn critical_cuts(p: &CyclicPoint) -> Vec<Vec<usize>> {
    classify_cuts(p)
        .into_iter()
        .filter(|c| c.kind == CutKind::Critical)
        .map(|c| c.side)
        .collect()
}

/// Smallest side of any critical cut (ties broken lexicographically), which
/// is subset-minimal; `None` for a base case.
pub fn minimal_critical_cut(p: &CyclicPoint) -> Option<Vec<usize>> {
    let n = p.n();
    critical_cuts(p)
        .into_iter()
        .flat_map(|s| {
            let c = complement(n, &s);
            [s, c]
        })
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
}

/// The value of y on a 1-edge, 3/2 − θ/10.
pub fn w_value(theta: &Rational) -> Rational {
    Rational::new(3.into(), 2.into()) - theta / int(10)
}
