//! The polyhedral Christofides baseline and the constructions for 2/3- and
//! 2/4-uniform points.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::cuts::{enumerate_cuts_upto, min_cut_value, side_mask};
use crate::cyclic::{validate_cyclic, CyclicPoint};
use crate::decomp::{all_perfect_matchings, decompose, DecompRequest, Family, RainbowSpec};
use crate::error::{Error, Result};
use crate::gluer::solve_cyclic;
use crate::graph::{check_convex_combination, is_tour, CompareMode, ConvexCombination, EdgeVector, Graph, Multigraph};
use crate::rational::{fmt_rat, half, int, one, rat, Rational};

/// Checks x(δ(u)) = 2 at every vertex and x(δ(U)) ≥ 2 on every cut.
pub fn check_subtour(g: &Graph, x: &EdgeVector) -> Result<()> {
    if x.len() != g.m() {
        return Err(Error::Input("vector length differs from edge count".into()));
    }
    if !x.is_nonneg() {
        return Err(Error::Input("vector has a negative entry".into()));
    }
    for (u, es) in g.incidence().iter().enumerate() {
        let d = x.sum_over(es);
        if d != int(2) {
            return Err(Error::Precondition(format!("x(delta({u})) = {}, expected 2", fmt_rat(&d))));
        }
    }
    let c = min_cut_value(g, x);
    if c < int(2) {
        return Err(Error::Precondition(format!("minimum cut {} is below 2", fmt_rat(&c))));
    }
    Ok(())
}

fn verify_tours(g: &Graph, c: &ConvexCombination, target: &EdgeVector) -> Result<()> {
    check_convex_combination(c, target, CompareMode::Equal).map_err(|d| Error::Internal(d.to_string()))?;
    if let Some(i) = c.terms.iter().position(|(_, f)| !is_tour(g, f)) {
        return Err(Error::Internal(format!("term {i} is not a tour")));
    }
    Ok(())
}

/// (3/2)x as tours: v-trees of x, each completed by O_T-joins of x/2.
pub fn christofides(g: &Graph, x: &EdgeVector) -> Result<ConvexCombination> {
    check_subtour(g, x)?;
    let trees = decompose(g, &DecompRequest { target: x.clone(), family: Family::RainbowVTree(RainbowSpec { v: 0, parts: vec![] }) })?;
    let z = x.scale(&half());
    let mut terms = Vec::new();
    for (lam, t) in &trees.terms {
        let odd: BTreeSet<usize> = t.odd_vertices(g).into_iter().collect();
        let joins = decompose(g, &DecompRequest { target: z.clone(), family: Family::OJoin(odd) })?;
        for (psi, j) in &joins.terms {
            terms.push((lam * psi, t.add(j)));
        }
    }
    let out = ConvexCombination::new(terms).normalized();
    verify_tours(g, &out, &x.scale(&rat(3, 2)))?;
    Ok(out)
}

/// Checks that every vertex has degree `k` and every cut has at least `k`
/// edges.
pub fn check_uniform(g: &Graph, k: usize) -> Result<()> {
    if let Some(u) = (0..g.n()).find(|&u| g.degree(u) != k) {
        return Err(Error::Precondition(format!("vertex {u} has degree {}, expected {k}", g.degree(u))));
    }
    let c = min_cut_value(g, &EdgeVector::constant(g.m(), one()));
    if c < int(k as i64) {
        return Err(Error::Precondition(format!("graph is only {c}-edge-connected, expected {k}")));
    }
    Ok(())
}

/// A 2-factor meeting every cut of at most four edges, by search over
/// perfect-matching complements.
pub fn covering_two_factor(g: &Graph) -> Result<Vec<usize>> {
    check_uniform(g, 3)?;
    let small: Vec<Vec<usize>> = enumerate_cuts_upto(g, 4)
        .into_iter()
        .map(|side| g.cut_edges(&side_mask(g.n(), &side)))
        .collect();
    for pm in all_perfect_matchings(g) {
        let factor: Vec<usize> = (0..g.m()).filter(|e| !pm.contains(e)).collect();
        if small.iter().all(|cut| cut.iter().any(|e| factor.contains(e))) {
            return Ok(factor);
        }
    }
    Err(Error::NotFound("no 2-factor covers every 3- and 4-edge cut".into()))
}

/// Result of replacing high-degree vertices by doubled cycles.
#[derive(Debug, Clone)]
pub struct SplitGraph {
    pub graph: Graph,
    /// Edge of the split graph to edge of the input; `None` on gadget edges.
    pub edge_map: Vec<Option<usize>>,
    /// Vertex of the split graph to vertex of the input.
    pub vertex_map: Vec<usize>,
}

impl SplitGraph {
    pub fn collapse(&self, f: &Multigraph, m: usize) -> Multigraph {
        let mut out = Multigraph::empty(m);
        for (e, &k) in f.mult.iter().enumerate() {
            if let Some(o) = self.edge_map[e] {
                out.mult[o] += k;
            }
        }
        out
    }
}

/// Every vertex of degree above `d` becomes a doubled cycle with one vertex
/// per incident edge.
pub fn split_high_degree(g: &Graph, d: usize) -> Result<SplitGraph> {
    if let Some(u) = (0..g.n()).find(|&u| g.degree(u) < d) {
        return Err(Error::Precondition(format!("vertex {u} has degree below {d}")));
    }
    let inc = g.incidence();
    let mut vertex_map = Vec::new();
    // (vertex, edge) → new vertex
    let mut slot: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut edge_map = Vec::new();
    for (u, es) in inc.iter().enumerate() {
        if es.len() <= d {
            let id = vertex_map.len();
            vertex_map.push(u);
            for &e in es {
                slot.insert((u, e), id);
            }
            continue;
        }
        let first = vertex_map.len();
        for (i, &e) in es.iter().enumerate() {
            slot.insert((u, e), first + i);
            vertex_map.push(u);
        }
        let k = es.len();
        for i in 0..k {
            for _ in 0..2 {
                edges.push((first + i, first + (i + 1) % k));
                edge_map.push(None);
            }
        }
    }
    for e in 0..g.m() {
        let (a, b) = g.edge(e);
        edges.push((slot[&(a, e)], slot[&(b, e)]));
        edge_map.push(Some(e));
    }
    let graph = Graph::new(vertex_map.len(), edges)?;
    Ok(SplitGraph { graph, edge_map, vertex_map })
}

/// 2-factors of (2/3)χ^E with their weights, each turned into the
/// 1/2-cyclic point with 1/2 on the factor and 1 on the complementary
/// matching.
pub fn reduce_uniform23(g: &Graph) -> Result<Vec<(Rational, CyclicPoint)>> {
    check_uniform(g, 3)?;
    let target = EdgeVector::constant(g.m(), rat(2, 3));
    let factors = decompose(g, &DecompRequest { target, family: Family::TwoFactor })?;
    factors
        .terms
        .iter()
        .map(|(mu, f)| Ok((mu.clone(), cyclic_from_factor(g, &f.support())?)))
        .collect()
}

pub fn cyclic_from_factor(g: &Graph, factor: &[usize]) -> Result<CyclicPoint> {
    let x = EdgeVector((0..g.m()).map(|e| if factor.contains(&e) { half() } else { one() }).collect());
    validate_cyclic(&half(), g, &x)
}

/// Components of a 2-factor as vertex labels.
fn factor_components(g: &Graph, factor: &[usize]) -> Vec<usize> {
    let mut uf = crate::graph::UnionFind::new(g.n());
    for &e in factor {
        let (a, b) = g.edge(e);
        uf.union(a, b);
    }
    let mut id = BTreeMap::new();
    (0..g.n())
        .map(|u| {
            let r = uf.find(u);
            let next = id.len();
            *id.entry(r).or_insert(next)
        })
        .collect()
}

/// Chord subsets {j : j mod 5 ∈ {i, i+1}}: each chord lies in two of five.
fn chord_subsets(chords: &[usize]) -> Vec<Vec<usize>> {
    (0..5)
        .map(|i| chords.iter().enumerate().filter(|(j, _)| j % 5 == i || j % 5 == (i + 1) % 5).map(|(_, &c)| c).collect())
        .collect()
}

/// Tours 𝒞 + 2T from r-trees of (2/5)χ on G/𝒞: value 1 on 𝒞 and 4/5 on the
/// other edges.
pub fn doubled_tree_tours(g: &Graph, factor: &[usize]) -> Result<ConvexCombination> {
    let comp = factor_components(g, factor);
    let k = comp.iter().max().map_or(0, |&c| c + 1);
    let mut cross = Vec::new();
    let mut chords = Vec::new();
    for e in (0..g.m()).filter(|e| !factor.contains(e)) {
        let (a, b) = g.edge(e);
        if comp[a] == comp[b] {
            chords.push(e);
        } else {
            cross.push(e);
        }
    }
    let base = Multigraph::from_edges(g.m(), factor.iter().copied());
    let trees: Vec<(Rational, Multigraph)> = if k == 1 {
        vec![(one(), Multigraph::empty(g.m()))]
    } else {
        let contracted = Graph::new(k, cross.iter().map(|&e| (comp[g.edge(e).0], comp[g.edge(e).1])).collect())?;
        let split = split_high_degree(&contracted, 5)?;
        let x = EdgeVector::constant(split.graph.m(), rat(2, 5));
        let dec = decompose(&split.graph, &DecompRequest { target: x, family: Family::RainbowVTree(RainbowSpec { v: 0, parts: vec![] }) })?;
        dec.terms
            .iter()
            .map(|(l, t)| {
                let back = split.collapse(t, cross.len());
                (l.clone(), Multigraph::from_edges(g.m(), back.support().into_iter().map(|i| cross[i])))
            })
            .collect()
    };
    let subsets = chord_subsets(&chords);
    let mut terms = Vec::new();
    for (l, t) in &trees {
        for s in &subsets {
            let extra = Multigraph::from_edges(g.m(), s.iter().copied());
            let f = base.add(t).add(t).add(&extra).add(&extra);
            terms.push((l * rat(1, 5), f));
        }
    }
    Ok(ConvexCombination::new(terms).normalized())
}

/// (17/12)·(2/3)χ^E, or (87/68)·(2/3)χ^E given a Hamilton cycle.
pub fn solve_uniform23(g: &Graph, hamiltonian_hint: Option<&[usize]>) -> Result<ConvexCombination> {
    check_uniform(g, 3)?;
    let out = match hamiltonian_hint {
        Some(h) => {
            let cycle = Multigraph::from_edges(g.m(), h.iter().copied());
            if h.len() != g.n() || cycle.max_mult() > 1 || cycle.degrees(g).iter().any(|&d| d != 2) || !is_tour(g, &cycle) {
                return Err(Error::Input("hint is not a Hamilton cycle".into()));
            }
            let y2 = solve_cyclic(&cyclic_from_factor(g, h)?)?;
            let mut terms = vec![(rat(7, 17), cycle)];
            terms.extend(y2.scaled(&rat(10, 17)).terms);
            ConvexCombination::new(terms).normalized()
        }
        None => {
            let factor = covering_two_factor(g)?;
            let y1 = doubled_tree_tours(g, &factor)?;
            let y2 = solve_cyclic(&cyclic_from_factor(g, &factor)?)?;
            let mut terms = y1.scaled(&rat(7, 9)).terms;
            terms.extend(y2.scaled(&rat(2, 9)).terms);
            ConvexCombination::new(terms).normalized()
        }
    };
    let factor = if hamiltonian_hint.is_some() { rat(87, 68) } else { rat(17, 12) };
    verify_tours(g, &out, &EdgeVector::constant(g.m(), factor * rat(2, 3)))?;
    Ok(out)
}

/// Term of the 2/4-uniform construction with its join kept apart.
#[derive(Debug, Clone)]
pub struct Uniform24Term {
    pub weight: Rational,
    pub matching: usize,
    pub tree: Multigraph,
    pub join: Multigraph,
}

#[derive(Debug, Clone)]
pub struct Uniform24 {
    pub combination: ConvexCombination,
    pub matchings: Vec<(Rational, Vec<usize>)>,
    pub terms: Vec<Uniform24Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Uniform24Audit {
    /// Pr[e ∈ J | e ∈ M] for every edge.
    pub join_given_matching: Vec<Rational>,
    /// Pr[e ∈ J] for every edge.
    pub join: Vec<Rational>,
}

impl Uniform24 {
    pub fn audit(&self, m: usize) -> Uniform24Audit {
        let mut in_m = vec![Rational::zero(); m];
        let mut both = vec![Rational::zero(); m];
        let mut join = vec![Rational::zero(); m];
        for t in &self.terms {
            let mm = &self.matchings[t.matching].1;
            for e in 0..m {
                let j = t.join.contains(e);
                if j {
                    join[e] += &t.weight;
                }
                if mm.contains(&e) {
                    in_m[e] += &t.weight;
                    if j {
                        both[e] += &t.weight;
                    }
                }
            }
        }
        let join_given_matching = both.iter().zip(&in_m).map(|(b, a)| if a.is_zero() { Rational::zero() } else { b / a }).collect();
        Uniform24Audit { join_given_matching, join }
    }
}

/// Proper cuts (both sides with at least two vertices) of exactly four
/// edges.
pub fn proper_four_cuts(g: &Graph) -> Vec<Vec<usize>> {
    enumerate_cuts_upto(g, 4)
        .into_iter()
        .filter(|side| {
            side.len() >= 2 && g.n() - side.len() >= 2 && g.cut_edges(&side_mask(g.n(), side)).len() == 4
        })
        .collect()
}

/// Greedy colouring of the graph whose vertices are the edges of `m` and
/// whose adjacencies are the edges of `g` joining them; classes are induced
/// matchings. Always `colours` classes, some possibly empty.
pub fn induced_matching_classes(g: &Graph, m: &[usize], colours: usize) -> Result<Vec<Vec<usize>>> {
    let mut owner = vec![usize::MAX; g.n()];
    for (i, &e) in m.iter().enumerate() {
        let (a, b) = g.edge(e);
        owner[a] = i;
        owner[b] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.len()];
    for e in 0..g.m() {
        let (a, b) = g.edge(e);
        if owner[a] != owner[b] {
            adj[owner[a]].insert(owner[b]);
            adj[owner[b]].insert(owner[a]);
        }
    }
    let mut colour = vec![usize::MAX; m.len()];
    for i in 0..m.len() {
        let used: BTreeSet<usize> = adj[i].iter().map(|&j| colour[j]).collect();
        let c = (0..).find(|c| !used.contains(c)).unwrap();
        if c >= colours {
            return Err(Error::Internal(format!("greedy colouring needs more than {colours} colours")));
        }
        colour[i] = c;
    }
    Ok((0..colours).map(|c| (0..m.len()).filter(|&i| colour[i] == c).map(|i| m[i]).collect()).collect())
}

/// (3/2 − 1/42)·(1/2)χ^E for a 4-regular 4-edge-connected graph with an
/// even number of vertices and no proper 4-edge cut.
pub fn solve_uniform24_base(g: &Graph) -> Result<Uniform24> {
    check_uniform(g, 4)?;
    if g.n() % 2 == 1 {
        return Err(Error::Precondition("odd number of vertices".into()));
    }
    if let Some(side) = proper_four_cuts(g).first() {
        return Err(Error::Precondition(format!("proper 4-edge cut {side:?}")));
    }
    let m = g.m();
    let pms = decompose(g, &DecompRequest { target: EdgeVector::constant(m, rat(1, 4)), family: Family::PerfectMatching })?;
    let inc = g.incidence();
    let mut matchings = Vec::new();
    let mut terms = Vec::new();
    for (k, (mu, pm)) in pms.terms.iter().enumerate() {
        let mm = pm.support();
        matchings.push((mu.clone(), mm.clone()));
        let classes = induced_matching_classes(g, &mm, 7)?;
        let z = EdgeVector((0..m).map(|e| if mm.contains(&e) { one() } else { rat(1, 3) }).collect());
        for class in &classes {
            let mut parts = Vec::new();
            for &e in class {
                let (a, b) = g.edge(e);
                for u in [a, b] {
                    parts.push(inc[u].iter().copied().filter(|x| !mm.contains(x)).collect());
                }
            }
            let trees = decompose(g, &DecompRequest { target: z.clone(), family: Family::RainbowVTree(RainbowSpec { v: 0, parts }) })?;
            let p = EdgeVector(
                (0..m)
                    .map(|e| if mm.contains(&e) && !class.contains(&e) { half() } else { rat(1, 6) })
                    .collect(),
            );
            for (lam, t) in &trees.terms {
                let odd: BTreeSet<usize> = t.odd_vertices(g).into_iter().collect();
                let joins = decompose(g, &DecompRequest { target: p.clone(), family: Family::OJoin(odd) })?;
                for (psi, j) in &joins.terms {
                    terms.push(Uniform24Term { weight: mu * rat(1, 7) * lam * psi, matching: k, tree: t.clone(), join: j.clone() });
                }
            }
        }
    }
    let combination = ConvexCombination::new(terms.iter().map(|t| (t.weight.clone(), t.tree.add(&t.join))).collect()).normalized();
    verify_tours(g, &combination, &EdgeVector::constant(m, rat(31, 42)))?;
    Ok(Uniform24 { combination, matchings, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{k4_graph, k4half, octahedron};

    #[test]
    fn christofides_k4half() {
        let p = k4half();
        let c = christofides(&p.graph, &p.x).unwrap();
        assert!(c.terms.iter().all(|(_, f)| is_tour(&p.graph, f)));
    }

    #[test]
    fn uniform23_k4() {
        let g = k4_graph();
        let c = solve_uniform23(&g, None).unwrap();
        assert!(!c.is_empty());
        let h = [0, 1, 2, 3];
        solve_uniform23(&g, Some(&h)).unwrap();
    }

    #[test]
    fn uniform24_octahedron() {
        let g = octahedron();
        let u = solve_uniform24_base(&g).unwrap();
        let a = u.audit(g.m());
        assert!(a.join_given_matching.iter().all(|v| *v == rat(19, 42)));
        assert!(a.join.iter().all(|v| *v == rat(5, 21)));
    }

    #[test]
    fn split_identity() {
        let g = k4_graph();
        let s = split_high_degree(&g, 3).unwrap();
        assert_eq!(s.graph.n(), 4);
        assert!(s.edge_map.iter().all(|e| e.is_some()));
    }
}
