//! Tours for cyclic points: the base-case construction, gluing over critical
//! cuts, and the top-level recursion.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use crate::connectors::{connectors_with_p, PropertyPSpec};
use crate::cuts::complement;
use crate::cyclic::{critical_cuts, expand_tour, minimal_critical_cut, to_cubic, CyclicPoint};
use crate::error::{Error, Result};
use crate::graph::{
    check_convex_combination, connected_without, is_tour, CompareMode, Contraction, ConvexCombination, EdgeVector,
    Multigraph,
};
use crate::lp::ColumnGen;
use crate::matchings::{partition_induced_matchings, MatchingPartition, PARTS};
use crate::parity::{parity_correct, parity_vector};
use crate::patterns::{fmt_profile, is_handpicked, pattern_at, pattern_of, phi2, profile_at, profile_of, Profile, PATTERNS};
use crate::rational::{fmt_rat, half, int, one, rat, Rational};

/// Weight of each of the five matching groups.
pub fn alpha() -> Rational {
    rat(1, PARTS as i64)
}

/// Largest admissible φ({2e_v}) in the base case, (1−α)θ/2.
pub fn zeta_max(theta: &Rational) -> Rational {
    (one() - alpha()) * theta / int(2)
}

/// y: 3/2 − αθ/2 on 1-edges, (3/2)x on fractional edges.
pub fn base_y(p: &CyclicPoint) -> EdgeVector {
    let three_halves = rat(3, 2);
    let w = &three_halves - alpha() * &p.theta / int(2);
    EdgeVector((0..p.m()).map(|e| if p.is_w[e] { w.clone() } else { &three_halves * p.x.get(e) }).collect())
}

/// Doubled-edge frequencies: 1/2 − αθ/2 on 1-edges, x²/2 elsewhere.
pub fn base_q(p: &CyclicPoint) -> EdgeVector {
    let w = half() - alpha() * &p.theta / int(2);
    EdgeVector(
        (0..p.m())
            .map(|e| if p.is_w[e] { w.clone() } else { p.x.get(e) * p.x.get(e) / int(2) })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseMethod {
    /// Connectors plus parity correctors over the five matchings.
    Construction,
    /// Exact LP over enumerated handpicked tours, used when the matching
    /// structure cannot carry the requested ζ.
    Enumeration,
}

#[derive(Debug, Clone)]
pub struct BaseCase {
    pub combination: ConvexCombination,
    pub partition: MatchingPartition,
    /// Λ_i per matching group.
    pub lambdas: Vec<Rational>,
    pub method: BaseMethod,
}

fn zeta_error(p: &CyclicPoint, v: usize, zeta: &Rational, context: &str) -> Error {
    Error::ZetaOutOfRange {
        zeta: fmt_rat(zeta),
        max: fmt_rat(&zeta_max(&p.theta)),
        vertex: v,
        context: context.to_string(),
    }
}

pub fn base_case_tours(p: &CyclicPoint, v: usize, zeta: &Rational) -> Result<BaseCase> {
    if !p.is_cubic() {
        return Err(Error::Precondition("base case needs a cubic point".into()));
    }
    if v >= p.n() {
        return Err(Error::Input(format!("vertex {v} out of range")));
    }
    if !critical_cuts(p).is_empty() {
        return Err(Error::Precondition("base case point has a critical cut".into()));
    }
    if *zeta < Rational::zero() || *zeta > zeta_max(&p.theta) {
        return Err(zeta_error(p, v, zeta, "base case"));
    }
    let mp = partition_induced_matchings(p, v)?;
    let (f, g) = p.fractional_at(v);
    let ew1 = p.e_of(p.graph.other(f, v));
    let ew2 = p.e_of(p.graph.other(g, v));
    let eligible: Vec<usize> = (1..PARTS)
        .filter(|&i| Some(i) != mp.forced_pair && !(ew1 == ew2 && mp.parts[i].contains(&ew1)))
        .collect();
    let big = zeta * int(2);
    let mut lambdas = vec![Rational::zero(); PARTS];
    if !big.is_zero() {
        if eligible.is_empty() {
            return enumerated_base_case(p, v, zeta, mp);
        }
        let each = &big / (int(eligible.len() as i64) * alpha());
        if each > p.theta {
            return enumerated_base_case(p, v, zeta, mp);
        }
        for &i in &eligible {
            lambdas[i] = each.clone();
        }
    }
    let mut terms = Vec::new();
    for i in 0..PARTS {
        let spec = PropertyPSpec { v, m: mp.parts[i].clone(), lambda: lambdas[i].clone() };
        let conns = connectors_with_p(p, &spec)?;
        let pv = parity_vector(p, &mp.parts[i])?;
        let mut memo: HashMap<Vec<usize>, ConvexCombination> = HashMap::new();
        for (lam, t) in &conns.terms {
            let odd = t.odd_vertices(&p.graph);
            if !memo.contains_key(&odd) {
                memo.insert(odd.clone(), parity_correct(p, t, &pv)?);
            }
            for (psi, j) in &memo[&odd].terms {
                terms.push((alpha() * lam * psi, t.add(j)));
            }
        }
    }
    let combination = ConvexCombination::new(terms).normalized();
    check_base_case(p, v, zeta, &combination).map_err(Error::Internal)?;
    Ok(BaseCase { combination, partition: mp, lambdas, method: BaseMethod::Construction })
}

/// Every guarantee of the base case: value y, doubled frequencies q,
/// φ({2e_v}) = ζ, handpicked terms, and connectivity away from v.
pub fn check_base_case(p: &CyclicPoint, v: usize, zeta: &Rational, c: &ConvexCombination) -> std::result::Result<(), String> {
    check_convex_combination(c, &base_y(p), CompareMode::Equal).map_err(|d| format!("value: {d}"))?;
    let q = base_q(p);
    let got = phi2(c, p.m());
    if let Some(e) = (0..p.m()).find(|&e| got.get(e) != q.get(e)) {
        return Err(format!(
            "doubled frequency of edge {e} is {}, expected {}",
            fmt_rat(got.get(e)),
            fmt_rat(q.get(e))
        ));
    }
    for (i, (_, f)) in c.terms.iter().enumerate() {
        if !is_handpicked(p, f) {
            return Err(format!("term {i} is not a handpicked tour"));
        }
        if !connected_without(&p.graph, f, v) {
            return Err(format!("term {i} minus the edges at {v} is disconnected"));
        }
    }
    let pr = profile_of(p, c, v).map_err(|e| e.to_string())?;
    if pr[0] != *zeta {
        return Err(format!("frequency of {{2e}} at {v} is {}, expected {}", fmt_rat(&pr[0]), fmt_rat(zeta)));
    }
    Ok(())
}

/// Largest point handled by tour enumeration.
pub const ENUMERATION_LIMIT: usize = 12;

/// All handpicked tours with multiplicities at most two whose edges away
/// from `v` connect the other vertices.
pub fn handpicked_tours(p: &CyclicPoint, v: usize) -> Result<Vec<Multigraph>> {
    if p.n() > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!(
            "tour enumeration limited to {ENUMERATION_LIMIT} vertices, got {}",
            p.n()
        )));
    }
    let g = &p.graph;
    let m = g.m();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&e| {
        let (a, b) = g.edge(e);
        (a.max(b), a.min(b), e)
    });
    // vertex u is complete once the edge at position last[u] is assigned
    let mut last = vec![0; p.n()];
    for (pos, &e) in order.iter().enumerate() {
        let (a, b) = g.edge(e);
        last[a] = pos;
        last[b] = pos;
    }
    let mut done_at: Vec<Vec<usize>> = vec![Vec::new(); m];
    for u in 0..p.n() {
        done_at[last[u]].push(u);
    }
    let labels: Vec<[usize; 3]> = (0..p.n()).map(|u| crate::patterns::labels(p, u)).collect();
    let mut out = Vec::new();
    let mut cur = Multigraph::empty(m);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        pos: usize,
        order: &[usize],
        p: &CyclicPoint,
        v: usize,
        done_at: &[Vec<usize>],
        labels: &[[usize; 3]],
        cur: &mut Multigraph,
        out: &mut Vec<Multigraph>,
    ) {
        if pos == order.len() {
            if is_tour(&p.graph, cur) && connected_without(&p.graph, cur, v) {
                out.push(cur.clone());
            }
            return;
        }
        let e = order[pos];
        let lo = if p.is_w[e] { 1 } else { 0 };
        for k in lo..=2 {
            cur.mult[e] = k;
            if done_at[pos].iter().all(|&u| pattern_at(cur, labels[u]).index().is_some()) {
                rec(pos + 1, order, p, v, done_at, labels, cur, out);
            }
        }
        cur.mult[e] = 0;
    }
    rec(0, &order, p, v, &done_at, &labels, &mut cur, &mut out);
    Ok(out)
}

/// What a refitted combination must reproduce at the chosen vertex.
pub enum VertexTarget<'a> {
    Zeta(&'a Rational),
    Profile(&'a Profile),
}

/// Exact LP over a pool of handpicked tours: value y, doubled frequencies q,
/// the vertex target at `v`, and φ({2e_u}) ≤ (1−α)θ/2 at every vertex.
pub fn fit_tours(p: &CyclicPoint, pool: &[Multigraph], v: usize, target: VertexTarget<'_>) -> Option<ConvexCombination> {
    let n = p.n();
    let mut b: Vec<Rational> = base_y(p).0;
    b.extend(base_q(p).0);
    match &target {
        VertexTarget::Zeta(z) => {
            b.push((*z).clone());
            b.push(one());
        }
        VertexTarget::Profile(pr) => b.extend(pr.iter().cloned()),
    }
    let fixed = b.len();
    b.extend(std::iter::repeat_n(zeta_max(&p.theta), n));
    let rows = b.len();
    let labels: Vec<[usize; 3]> = (0..n).map(|u| crate::patterns::labels(p, u)).collect();
    let indicator = |c: bool| if c { one() } else { Rational::zero() };
    let mut lp: ColumnGen<Option<&Multigraph>> = ColumnGen::new(b);
    for f in pool {
        let Some(k) = pattern_at(f, labels[v]).index() else { continue };
        let mut col: Vec<Rational> = f.mult.iter().map(|&k| int(k as i64)).collect();
        col.extend(f.mult.iter().map(|&k| indicator(k == 2)));
        match &target {
            VertexTarget::Zeta(_) => {
                col.push(indicator(k == 0));
                col.push(one());
            }
            VertexTarget::Profile(_) => col.extend((0..8).map(|j| indicator(j == k))),
        }
        col.extend((0..n).map(|u| indicator(pattern_at(f, labels[u]) == PATTERNS[0])));
        lp.add_column(col, Some(f));
    }
    for u in 0..n {
        let mut col = vec![Rational::zero(); rows];
        col[fixed + u] = one();
        lp.add_column(col, None);
    }
    let sol = lp.solve(|_| Ok(None)).ok()?;
    let terms = sol.terms.into_iter().filter_map(|(l, f)| f.map(|f| (l, f.clone()))).collect();
    Some(ConvexCombination::new(terms).normalized())
}

fn enumerated_base_case(p: &CyclicPoint, v: usize, zeta: &Rational, mp: MatchingPartition) -> Result<BaseCase> {
    let tours = handpicked_tours(p, v).map_err(|e| zeta_error(p, v, zeta, &format!("enumeration fallback: {e}")))?;
    let combination = fit_tours(p, &tours, v, VertexTarget::Zeta(zeta))
        .ok_or_else(|| zeta_error(p, v, zeta, "no combination of handpicked tours attains this value"))?;
    check_base_case(p, v, zeta, &combination).map_err(Error::Internal)?;
    Ok(BaseCase { combination, partition: mp, lambdas: vec![Rational::zero(); PARTS], method: BaseMethod::Enumeration })
}

/// One side of a critical cut after contracting the other side.
pub struct Side<'a> {
    pub point: &'a CyclicPoint,
    pub contraction: &'a Contraction,
    pub combination: &'a ConvexCombination,
}

impl<'a> Side<'a> {
    pub fn new(point: &'a CyclicPoint, contraction: &'a Contraction, combination: &'a ConvexCombination) -> Self {
        Side { point, contraction, combination }
    }
}

/// Host labels (e, f, g) of a critical cut: the 1-edge, then the fractional
/// edges by value and index.
fn cut_labels(host: &CyclicPoint, side: &[usize]) -> [usize; 3] {
    let mask = crate::cuts::side_mask(host.n(), side);
    let cut = host.graph.cut_edges(&mask);
    let e = *cut.iter().find(|&&e| host.is_w[e]).expect("critical cut has a 1-edge");
    let mut fr: Vec<usize> = cut.iter().copied().filter(|&x| !host.is_w[x]).collect();
    fr.sort_by(|&a, &b| host.x.get(a).cmp(host.x.get(b)).then(a.cmp(&b)));
    [e, fr[0], fr[1]]
}

/// Merges tours of the two sides with equal patterns on the cut. `inner`
/// is the side whose tours stay connected without its pseudovertex.
pub fn glue_over_cut(host: &CyclicPoint, u_side: &[usize], inner: &Side<'_>, outer: &Side<'_>) -> Result<ConvexCombination> {
    let m = host.m();
    let lab = cut_labels(host, u_side);
    let lift = |s: &Side<'_>| -> Vec<(Rational, Multigraph)> {
        s.combination.terms.iter().map(|(l, f)| (l.clone(), s.contraction.lift(f, m))).collect()
    };
    for (i, (_, f)) in inner.combination.terms.iter().enumerate() {
        if !connected_without(&inner.point.graph, f, inner.contraction.pseudovertex) {
            return Err(Error::Connectivity(format!(
                "term {i} of the side {u_side:?} is disconnected without its pseudovertex"
            )));
        }
    }
    let a = lift(inner);
    let b = lift(outer);
    let pa = profile_at(&ConvexCombination::new(a.clone()), lab)?;
    let pb = profile_at(&ConvexCombination::new(b.clone()), lab)?;
    if let Some(k) = (0..8).find(|&k| pa[k] != pb[k]) {
        return Err(Error::ProfileMismatch {
            coordinate: PATTERNS[k].to_string(),
            left: fmt_rat(&pa[k]),
            right: fmt_rat(&pb[k]),
            context: format!("cut {u_side:?}; inner [{}]; outer [{}]", fmt_profile(&pa), fmt_profile(&pb)),
        });
    }
    let group = |list: Vec<(Rational, Multigraph)>| {
        let mut by: BTreeMap<usize, Vec<(Rational, Multigraph)>> = BTreeMap::new();
        for (l, f) in list {
            let k = pattern_at(&f, lab).index().expect("checked by profile");
            by.entry(k).or_default().push((l, f));
        }
        for v in by.values_mut() {
            v.sort_by(|x, y| y.0.cmp(&x.0).then_with(|| x.1.cmp(&y.1)));
        }
        by
    };
    let ga = group(a);
    let gb = group(b);
    let mut terms = Vec::new();
    for (k, la) in ga {
        let lb = &gb[&k];
        let (mut i, mut j) = (0, 0);
        let mut ra = la.first().map(|t| t.0.clone()).unwrap_or_default();
        let mut rb = lb.first().map(|t| t.0.clone()).unwrap_or_default();
        while i < la.len() && j < lb.len() {
            let take = if ra < rb { ra.clone() } else { rb.clone() };
            let mut merged = la[i].1.clone();
            for e in 0..m {
                merged.mult[e] = merged.mult[e].max(lb[j].1.mult[e]);
            }
            terms.push((take.clone(), merged));
            ra -= &take;
            rb -= &take;
            if ra.is_zero() {
                i += 1;
                if i < la.len() {
                    ra = la[i].0.clone();
                }
            }
            if rb.is_zero() {
                j += 1;
                if j < lb.len() {
                    rb = lb[j].0.clone();
                }
            }
        }
    }
    Ok(ConvexCombination::new(terms))
}

/// Permutation of profile coordinates exchanging the roles of f and g.
const SWAP_FG: [usize; 8] = [0, 2, 1, 4, 3, 5, 7, 6];

/// Profile of a side at its pseudovertex, in host cut labels.
fn host_profile(s: &Side<'_>, lab: [usize; 3]) -> Profile {
    let m = s.contraction.edge_map.iter().max().map_or(0, |&e| e + 1).max(lab.iter().max().unwrap() + 1);
    let lifted = s.combination.terms.iter().map(|(l, f)| (l.clone(), s.contraction.lift(f, m))).collect();
    profile_at(&ConvexCombination::new(lifted), lab).expect("handpicked side")
}

/// Converts a profile in host cut labels to the side's own labels.
fn to_local(pr: &Profile, s: &Side<'_>, lab: [usize; 3]) -> Profile {
    let local = crate::patterns::labels(s.point, s.contraction.pseudovertex);
    if s.contraction.edge_map[local[1]] == lab[1] {
        pr.clone()
    } else {
        std::array::from_fn(|k| pr[SWAP_FG[k]].clone())
    }
}

/// Re-weights the terms of `s` so that its profile matches `other`'s.
fn refit(s: &Side<'_>, other: &Side<'_>, lab: [usize; 3]) -> Option<ConvexCombination> {
    let pool: Vec<Multigraph> = s.combination.terms.iter().map(|(_, f)| f.clone()).collect();
    refit_with_pool(s, &pool, other, lab)
}

fn refit_with_pool(s: &Side<'_>, pool: &[Multigraph], other: &Side<'_>, lab: [usize; 3]) -> Option<ConvexCombination> {
    let target = to_local(&host_profile(other, lab), s, lab);
    fit_tours(s.point, pool, s.contraction.pseudovertex, VertexTarget::Profile(&target))
}

#[derive(Debug, Clone, Default)]
pub struct CyclicStats {
    pub base_cases: usize,
    pub glued_cuts: usize,
    pub enumeration_fallbacks: usize,
    pub forced_pairs: usize,
    /// Cuts whose profiles were reconciled by refitting one side.
    pub repairs: usize,
    /// (cut side in the local point, ζ* read off the recursive side).
    pub zetas: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct CyclicSolution {
    /// Tours of the input host.
    pub combination: ConvexCombination,
    /// Tours of the cubic reduction, before path expansion.
    pub reduced: Option<ConvexCombination>,
    pub stats: CyclicStats,
}

/// y = 3/2 − θ/10 on 1-edges and (3/2)x elsewhere, as a combination of
/// tours of the input host.
pub fn solve_cyclic(p: &CyclicPoint) -> Result<ConvexCombination> {
    solve_cyclic_with(p, &Rational::zero()).map(|s| s.combination)
}

/// As `solve_cyclic`, with φ({2e_0}) = ζ in the innermost base case.
pub fn solve_cyclic_with(p: &CyclicPoint, zeta: &Rational) -> Result<CyclicSolution> {
    let y = p.target_y();
    if p.h_edges().is_empty() {
        // a Hamilton cycle of 1-edges: mix the cycle with its double
        let once = Multigraph::from_edges(p.m(), 0..p.m());
        let twice = once.add(&once);
        let b = half() - &p.theta / int(10);
        let c = ConvexCombination::new(vec![(one() - &b, once), (b, twice)]).normalized();
        check_convex_combination(&c, &y, CompareMode::Equal).map_err(|d| Error::Internal(d.to_string()))?;
        return Ok(CyclicSolution { combination: c, reduced: None, stats: CyclicStats::default() });
    }
    let r = to_cubic(p)?;
    let mut stats = CyclicStats::default();
    let reduced = solve_rec(&r.reduced, zeta, &mut stats)?;
    let terms = reduced
        .terms
        .iter()
        .map(|(l, f)| expand_tour(&r, f).map(|t| (l.clone(), t)))
        .collect::<Result<Vec<_>>>()?;
    let combination = ConvexCombination::new(terms).normalized();
    check_convex_combination(&combination, &y, CompareMode::Equal).map_err(|d| Error::Internal(d.to_string()))?;
    if let Some(i) = combination.terms.iter().position(|(_, f)| !is_tour(&p.graph, f)) {
        return Err(Error::Internal(format!("term {i} is not a tour")));
    }
    Ok(CyclicSolution { combination, reduced: Some(reduced), stats })
}

fn solve_rec(p: &CyclicPoint, zeta: &Rational, stats: &mut CyclicStats) -> Result<ConvexCombination> {
    let Some(u_side) = minimal_critical_cut(p) else {
        stats.base_cases += 1;
        let base = base_case_tours(p, 0, zeta)?;
        note(stats, &base);
        return Ok(base.combination);
    };
    let keep_u: BTreeSet<usize> = u_side.iter().copied().collect();
    let keep_b: BTreeSet<usize> = complement(p.n(), &u_side).into_iter().collect();
    let (pu, cu) = p.contracted(&keep_u)?;
    let (pb, cb) = p.contracted(&keep_b)?;
    let comb_b = solve_rec(&pb, zeta, stats)?;
    let zeta_star = profile_of(&pb, &comb_b, cb.pseudovertex)?[0].clone();
    stats.zetas.push(zeta_star.clone());
    stats.base_cases += 1;
    let base = base_case_tours(&pu, cu.pseudovertex, &zeta_star).map_err(|e| match e {
        Error::ZetaOutOfRange { zeta, max, vertex, context } => Error::ZetaOutOfRange {
            zeta,
            max,
            vertex,
            context: format!("{context}; side {u_side:?} of a critical cut"),
        },
        other => other,
    })?;
    note(stats, &base);
    let mut inner = base.combination;
    let mut outer = comb_b;
    let glued = match glue_over_cut(p, &u_side, &Side::new(&pu, &cu, &inner), &Side::new(&pb, &cb, &outer)) {
        Err(Error::ProfileMismatch { .. }) => {
            let lab = cut_labels(p, &u_side);
            if let Some(c) = refit(&Side::new(&pu, &cu, &inner), &Side::new(&pb, &cb, &outer), lab) {
                inner = c;
            } else if let Some(c) = refit(&Side::new(&pb, &cb, &outer), &Side::new(&pu, &cu, &inner), lab) {
                outer = c;
            } else if pu.n() <= ENUMERATION_LIMIT {
                let pool = handpicked_tours(&pu, cu.pseudovertex)?;
                if let Some(c) = refit_with_pool(&Side::new(&pu, &cu, &inner), &pool, &Side::new(&pb, &cb, &outer), lab) {
                    inner = c;
                }
            }
            stats.repairs += 1;
            glue_over_cut(p, &u_side, &Side::new(&pu, &cu, &inner), &Side::new(&pb, &cb, &outer))?
        }
        other => other?,
    };
    stats.glued_cuts += 1;
    for (i, (_, f)) in glued.terms.iter().enumerate() {
        if !is_handpicked(p, f) {
            return Err(Error::Internal(format!("glued term {i} is not a handpicked tour")));
        }
    }
    Ok(glued)
}

fn note(stats: &mut CyclicStats, base: &BaseCase) {
    if base.method == BaseMethod::Enumeration {
        stats.enumeration_fallbacks += 1;
    }
    if base.partition.forced_pair.is_some() {
        stats.forced_pairs += 1;
    }
}

/// Pattern of every vertex in every term, for reports.
pub fn all_handpicked(p: &CyclicPoint, c: &ConvexCombination) -> bool {
    c.terms.iter().all(|(_, f)| (0..p.n()).all(|u| pattern_of(p, f, u).is_ok()) && is_tour(&p.graph, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::k4half;

    #[test]
    fn k4half_zero() {
        let p = k4half();
        let b = base_case_tours(&p, 0, &Rational::zero()).unwrap();
        assert_eq!(b.method, BaseMethod::Construction);
        assert_eq!(base_y(&p).0[4], rat(29, 20));
    }

    #[test]
    fn k4half_tenth() {
        let p = k4half();
        let b = base_case_tours(&p, 0, &rat(1, 10)).unwrap();
        assert_eq!(profile_of(&p, &b.combination, 0).unwrap()[0], rat(1, 10));
    }

    #[test]
    fn zeta_range() {
        let p = k4half();
        assert!(matches!(base_case_tours(&p, 0, &rat(1, 4)), Err(Error::ZetaOutOfRange { .. })));
    }

    #[test]
    fn rational_is_one() {
        assert!(alpha() * int(5) == one());
    }
}
