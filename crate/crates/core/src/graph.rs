//! Host graphs with stable edge indices, multigraphs over them, and
//! convex combinations of multigraphs.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, zero, Rational};

/// Undirected loopless host graph. Parallel edges are allowed; each edge
/// keeps the index it was created with.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Input(format!("edge {i} ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::Input(format!("edge {i} is a loop at {u}")));
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn other(&self, e: usize, u: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == u {
            b
        } else {
            a
        }
    }

    /// Incident edge indices per vertex, in index order.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(i);
            inc[v].push(i);
        }
        inc
    }

    pub fn degree(&self, u: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == u || b == u).count()
    }

    /// First edge joining `u` and `v`, if any.
    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|&(a, b)| (a == u && b == v) || (a == v && b == u))
    }

    /// Edges with exactly one endpoint in `side`.
    pub fn cut_edges(&self, side: &[bool]) -> Vec<usize> {
        (0..self.m())
            .filter(|&e| {
                let (u, v) = self.edges[e];
                side[u] != side[v]
            })
            .collect()
    }

    pub fn is_connected_on(&self, edge_ok: impl Fn(usize) -> bool) -> bool {
        let mut uf = UnionFind::new(self.n);
        let mut comps = self.n;
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if edge_ok(e) && uf.union(u, v) {
                comps -= 1;
            }
        }
        comps <= 1
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_on(|_| true)
    }

    /// Subgraph keeping only the listed edges; returns the map from new to
    /// old edge index.
    pub fn edge_subgraph(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let edges = keep.iter().map(|&e| self.edges[e]).collect();
        (Graph { n: self.n, edges }, keep.to_vec())
    }
}

/// Disjoint-set forest with path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when the two classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Multi-subgraph of a host: a multiplicity per host edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multigraph {
    pub mult: Vec<u32>,
}

impl Multigraph {
    pub fn empty(m: usize) -> Self {
        Multigraph { mult: vec![0; m] }
    }

    pub fn from_edges(m: usize, edges: impl IntoIterator<Item = usize>) -> Self {
        let mut g = Multigraph::empty(m);
        for e in edges {
            g.mult[e] += 1;
        }
        g
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.mult.len()).filter(|&e| self.mult[e] > 0).collect()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.mult[e] > 0
    }

    pub fn add(&self, other: &Multigraph) -> Multigraph {
        Multigraph {
            mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn degree(&self, host: &Graph, u: usize) -> u32 {
        host.edges()
            .iter()
            .zip(&self.mult)
            .map(|(&(a, b), &k)| if a == u || b == u { k } else { 0 })
            .sum()
    }

    pub fn degrees(&self, host: &Graph) -> Vec<u32> {
        let mut d = vec![0; host.n()];
        for (&(a, b), &k) in host.edges().iter().zip(&self.mult) {
            d[a] += k;
            d[b] += k;
        }
        d
    }

    pub fn odd_vertices(&self, host: &Graph) -> Vec<usize> {
        let d = self.degrees(host);
        (0..host.n()).filter(|&u| d[u] % 2 == 1).collect()
    }

    pub fn max_mult(&self) -> u32 {
        self.mult.iter().copied().max().unwrap_or(0)
    }

    /// Canonical sorted list of (u, v, mult) with u < v, for display and
    /// ordering.
    pub fn edge_list(&self, host: &Graph) -> Vec<(usize, usize, u32)> {
        let mut out: Vec<_> = self
            .support()
            .into_iter()
            .map(|e| {
                let (a, b) = host.edge(e);
                (a.min(b), a.max(b), self.mult[e])
            })
            .collect();
        out.sort();
        out
    }
}

/// Spanning, connected, every degree even.
pub fn is_tour(host: &Graph, f: &Multigraph) -> bool {
    let d = f.degrees(host);
    if host.n() > 1 && d.contains(&0) {
        return false;
    }
    if d.iter().any(|k| k % 2 == 1) {
        return false;
    }
    host.is_connected_on(|e| f.mult[e] > 0)
}

/// True when the edges of `f` avoiding `skip` connect every vertex other
/// than `skip`.
pub fn connected_without(host: &Graph, f: &Multigraph, skip: usize) -> bool {
    let mut uf = UnionFind::new(host.n());
    let mut comps = host.n() - 1;
    for (e, &(a, b)) in host.edges().iter().enumerate() {
        if f.mult[e] > 0 && a != skip && b != skip && uf.union(a, b) {
            comps -= 1;
        }
    }
    comps <= 1
}

/// Exact rational value per host edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeVector(pub Vec<Rational>);

impl EdgeVector {
    pub fn zeros(m: usize) -> Self {
        EdgeVector(vec![zero(); m])
    }

    pub fn constant(m: usize, c: Rational) -> Self {
        EdgeVector(vec![c; m])
    }

    pub fn from_multigraph(f: &Multigraph) -> Self {
        EdgeVector(f.mult.iter().map(|&k| Rational::from_integer(k.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, e: usize) -> &Rational {
        &self.0[e]
    }

    pub fn scale(&self, c: &Rational) -> EdgeVector {
        EdgeVector(self.0.iter().map(|v| v * c).collect())
    }

    pub fn add(&self, other: &EdgeVector) -> EdgeVector {
        EdgeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sum_over(&self, edges: &[usize]) -> Rational {
        edges.iter().fold(zero(), |acc, &e| acc + &self.0[e])
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&e| !self.0[e].is_zero()).collect()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }
}

impl fmt::Display for EdgeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_rat).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Weighted list of multigraphs over one host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexCombination {
    pub terms: Vec<(Rational, Multigraph)>,
}

impl ConvexCombination {
    pub fn new(terms: Vec<(Rational, Multigraph)>) -> Self {
        ConvexCombination { terms }
    }

    pub fn single(f: Multigraph) -> Self {
        ConvexCombination {
            terms: vec![(Rational::one(), f)],
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_weight(&self) -> Rational {
        self.terms.iter().fold(zero(), |acc, (l, _)| acc + l)
    }

    /// Merges identical multigraphs, drops zero weights and sorts by
    /// descending multiplier then by multigraph.
    pub fn normalized(&self) -> ConvexCombination {
        let mut merged: Vec<(Rational, Multigraph)> = Vec::new();
        let mut sorted = self.terms.clone();
        sorted.sort_by(|a, b| a.1.cmp(&b.1));
        for (l, f) in sorted {
            match merged.last_mut() {
                Some((acc, g)) if *g == f => *acc += l,
                _ => merged.push((l, f)),
            }
        }
        merged.retain(|(l, _)| !l.is_zero());
        merged.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        ConvexCombination { terms: merged }
    }

    /// Multiplies every multiplier by `c`.
    pub fn scaled(&self, c: &Rational) -> ConvexCombination {
        ConvexCombination {
            terms: self.terms.iter().map(|(l, f)| (l * c, f.clone())).collect(),
        }
    }

    pub fn map_terms(&self, mut g: impl FnMut(&Multigraph) -> Multigraph) -> ConvexCombination {
        ConvexCombination {
            terms: self.terms.iter().map(|(l, f)| (l.clone(), g(f))).collect(),
        }
    }
}

pub fn combination_value(c: &ConvexCombination, m: usize) -> EdgeVector {
    let mut out = EdgeVector::zeros(m);
    for (l, f) in &c.terms {
        for (e, &k) in f.mult.iter().enumerate() {
            if k > 0 {
                out.0[e] += l * Rational::from_integer(k.into());
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMode {
    Equal,
    Dominated,
}

/// First problem found when checking a combination against a target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CombinationDefect {
    NonPositiveMultiplier { term: usize, value: String },
    WeightSum(String),
    WrongLength { term: usize },
    Edge { edge: usize, got: String, want: String },
}

impl fmt::Display for CombinationDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CombinationDefect::NonPositiveMultiplier { term, value } => {
                write!(f, "term {term} has multiplier {value}")
            }
            CombinationDefect::WeightSum(s) => write!(f, "multipliers sum to {s}"),
            CombinationDefect::WrongLength { term } => write!(f, "term {term} has wrong edge count"),
            CombinationDefect::Edge { edge, got, want } => {
                write!(f, "edge {edge}: value {got}, target {want}")
            }
        }
    }
}

pub fn check_convex_combination(
    c: &ConvexCombination,
    target: &EdgeVector,
    mode: CompareMode,
) -> std::result::Result<(), CombinationDefect> {
    for (i, (l, f)) in c.terms.iter().enumerate() {
        if !l.is_positive() {
            return Err(CombinationDefect::NonPositiveMultiplier {
                term: i,
                value: fmt_rat(l),
            });
        }
        if f.mult.len() != target.len() {
            return Err(CombinationDefect::WrongLength { term: i });
        }
    }
    let total = c.total_weight();
    if !total.is_one() {
        return Err(CombinationDefect::WeightSum(fmt_rat(&total)));
    }
    let value = combination_value(c, target.len());
    for e in 0..target.len() {
        let ok = match mode {
            CompareMode::Equal => value.0[e] == target.0[e],
            CompareMode::Dominated => value.0[e] <= target.0[e],
        };
        if !ok {
            return Err(CombinationDefect::Edge {
                edge: e,
                got: fmt_rat(&value.0[e]),
                want: fmt_rat(&target.0[e]),
            });
        }
    }
    Ok(())
}

pub fn verify_convex_combination(c: &ConvexCombination, target: &EdgeVector, mode: CompareMode) -> bool {
    check_convex_combination(c, target, mode).is_ok()
}

/// Result of contracting the complement of a kept vertex set.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: Graph,
    pub pseudovertex: usize,
    /// Kept vertex ids in host order; new id of `kept[i]` is `i`.
    pub kept: Vec<usize>,
    /// New edge index to host edge index.
    pub edge_map: Vec<usize>,
}

impl Contraction {
    pub fn lift(&self, f: &Multigraph, host_m: usize) -> Multigraph {
        let mut out = Multigraph::empty(host_m);
        for (i, &k) in f.mult.iter().enumerate() {
            out.mult[self.edge_map[i]] += k;
        }
        out
    }

    pub fn restrict(&self, v: &EdgeVector) -> EdgeVector {
        EdgeVector(self.edge_map.iter().map(|&e| v.0[e].clone()).collect())
    }
}

/// Keeps `keep` and identifies every other vertex into one pseudovertex,
/// whose id is `keep.len()`. Edges inside the complement disappear.
pub fn contract(host: &Graph, keep: &BTreeSet<usize>) -> Result<Contraction> {
    if keep.is_empty() || keep.len() >= host.n() {
        return Err(Error::Input("contract needs a proper nonempty vertex set".into()));
    }
    if keep.iter().any(|&u| u >= host.n()) {
        return Err(Error::Input("contract set has an out-of-range vertex".into()));
    }
    let kept: Vec<usize> = keep.iter().copied().collect();
    let p = kept.len();
    let mut new_id = vec![p; host.n()];
    for (i, &u) in kept.iter().enumerate() {
        new_id[u] = i;
    }
    let mut edges = Vec::new();
    let mut edge_map = Vec::new();
    for (e, &(u, v)) in host.edges().iter().enumerate() {
        let (a, b) = (new_id[u], new_id[v]);
        if a != b {
            edges.push((a, b));
            edge_map.push(e);
        }
    }
    Ok(Contraction {
        graph: Graph::new(p + 1, edges)?,
        pseudovertex: p,
        kept,
        edge_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn cycle4() -> Graph {
        Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn cycle_is_tour() {
        let g = cycle4();
        assert!(is_tour(&g, &Multigraph { mult: vec![1; 4] }));
        assert!(!is_tour(&g, &Multigraph { mult: vec![2, 0, 0, 0] }));
    }

    #[test]
    fn contract_path() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let c = contract(&g, &[0, 1].into_iter().collect()).unwrap();
        assert_eq!(c.graph.n(), 3);
        assert_eq!(c.graph.m(), 2);
        let c = contract(&g, &[0].into_iter().collect()).unwrap();
        assert_eq!(c.graph.n(), 2);
        assert_eq!(c.graph.m(), 1);
        assert!(contract(&g, &BTreeSet::new()).is_err());
    }

    #[test]
    fn weights_must_sum_to_one() {
        let g = cycle4();
        let c = ConvexCombination::new(vec![(rat(99, 100), Multigraph { mult: vec![1; 4] })]);
        let t = EdgeVector::constant(g.m(), rat(99, 100));
        assert!(matches!(
            check_convex_combination(&c, &t, CompareMode::Equal),
            Err(CombinationDefect::WeightSum(_))
        ));
    }

    #[test]
    fn normalization_merges_duplicates() {
        let f = Multigraph { mult: vec![1, 0] };
        let c = ConvexCombination::new(vec![(rat(1, 3), f.clone()), (rat(2, 3), f.clone())]);
        assert_eq!(c.normalized().terms, vec![(rat(1, 1), f)]);
    }
}
