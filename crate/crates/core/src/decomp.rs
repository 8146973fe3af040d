//! Exact convex decomposition of a target vector into members of a
//! combinatorial family, by column generation over an exact simplex
//! master with combinatorial pricing oracles.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::blossom::{max_weight_perfect_matching, Weight};
use crate::error::{Error, Result};
use crate::graph::{check_convex_combination, CompareMode, ConvexCombination, EdgeVector, Graph, Multigraph, UnionFind};
use crate::lp::{ColumnGen, Priced};
use crate::matroid::{all_rainbow_vtrees, is_rainbow_vtree, max_weight_rainbow_vtree};
use crate::rational::{fmt_rat, one, zero, Rational};

/// Vertex and disjoint parts for rainbow v-trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RainbowSpec {
    pub v: usize,
    pub parts: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    RainbowVTree(RainbowSpec),
    OJoin(BTreeSet<usize>),
    PerfectMatching,
    TwoFactor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    ColumnGeneration,
    Exhaustive,
}

#[derive(Debug, Clone)]
pub struct DecompRequest {
    pub target: EdgeVector,
    pub family: Family,
}

/// Membership test for a single 0/1 edge set.
pub fn is_member(g: &Graph, family: &Family, f: &Multigraph) -> bool {
    if f.max_mult() > 1 {
        return false;
    }
    let set = f.support();
    match family {
        Family::RainbowVTree(spec) => is_rainbow_vtree(g, spec.v, &spec.parts, &set),
        Family::OJoin(odd) => {
            let got: BTreeSet<usize> = f.odd_vertices(g).into_iter().collect();
            got == *odd
        }
        Family::PerfectMatching => f.degrees(g).iter().all(|&d| d == 1),
        Family::TwoFactor => f.degrees(g).iter().all(|&d| d == 2),
    }
}

/// Decomposes with column generation.
pub fn decompose(g: &Graph, req: &DecompRequest) -> Result<ConvexCombination> {
    decompose_with(g, req, Strategy::ColumnGeneration)
}

pub fn decompose_with(g: &Graph, req: &DecompRequest, strategy: Strategy) -> Result<ConvexCombination> {
    let target = &req.target;
    if target.len() != g.m() {
        return Err(Error::Input("target length differs from edge count".into()));
    }
    if !target.is_nonneg() {
        return Err(Error::Input("target has a negative entry".into()));
    }
    if let Family::RainbowVTree(spec) = &req.family {
        let mut seen = BTreeSet::new();
        for p in &spec.parts {
            for &e in p {
                if !seen.insert(e) {
                    return Err(Error::Input(format!("edge {e} lies in two parts")));
                }
            }
        }
    }
    let support = target.support();
    let (gs, map) = g.edge_subgraph(&support);
    let local_family = localize(&req.family, &support);
    let rows = support.len() + 1;
    let mut b: Vec<Rational> = support.iter().map(|&e| target.0[e].clone()).collect();
    b.push(one());

    let column = |set: &[usize]| -> Vec<Rational> {
        let mut c = vec![zero(); rows];
        for &e in set {
            c[e] = one();
        }
        c[rows - 1] = one();
        c
    };

    let mut lp: ColumnGen<Vec<usize>> = ColumnGen::new(b);
    let result = match strategy {
        Strategy::Exhaustive => {
            for set in enumerate_family(&gs, &local_family)? {
                lp.add_column(column(&set), set);
            }
            lp.solve(|_| Ok(None))
        }
        Strategy::ColumnGeneration => lp.solve(|y| {
            let weights = &y[..rows - 1];
            Ok(price(&gs, &local_family, weights)?.map(|set| Priced {
                column: column(&set),
                payload: set,
            }))
        }),
    };
    let sol = result.map_err(|e| match e {
        Error::Infeasible(msg) => Error::Infeasible(format!("{}: {msg}", family_name(&req.family))),
        other => other,
    })?;
    let terms = sol
        .terms
        .iter()
        .map(|(l, set)| (l.clone(), Multigraph::from_edges(g.m(), set.iter().map(|&e| map[e]))))
        .collect();
    let out = ConvexCombination::new(terms).normalized();
    check_convex_combination(&out, target, CompareMode::Equal)
        .map_err(|d| Error::Internal(format!("decomposition value mismatch: {d}")))?;
    if out.len() > 2 * support.len().max(1) {
        return Err(Error::Internal(format!(
            "decomposition has {} terms, above the cap {}",
            out.len(),
            2 * support.len()
        )));
    }
    Ok(out)
}

fn family_name(f: &Family) -> &'static str {
    match f {
        Family::RainbowVTree(_) => "rainbow v-trees",
        Family::OJoin(_) => "O-joins",
        Family::PerfectMatching => "perfect matchings",
        Family::TwoFactor => "2-factors",
    }
}

fn localize(family: &Family, support: &[usize]) -> Family {
    match family {
        Family::RainbowVTree(spec) => Family::RainbowVTree(RainbowSpec {
            v: spec.v,
            parts: spec
                .parts
                .iter()
                .map(|p| p.iter().filter_map(|e| support.iter().position(|s| s == e)).collect())
                .collect(),
        }),
        other => other.clone(),
    }
}

/// Maximum-weight family member, or `None` if the family is empty.
pub fn price(g: &Graph, family: &Family, weights: &[Rational]) -> Result<Option<Vec<usize>>> {
    Ok(match family {
        Family::RainbowVTree(spec) => {
            if spec.parts.iter().any(|p| p.is_empty()) {
                None
            } else {
                max_weight_rainbow_vtree(g, spec.v, &spec.parts, weights)
            }
        }
        Family::OJoin(odd) => match scaled(weights) {
            Some(w) => max_weight_ojoin(g, odd, &w),
            None => max_weight_ojoin(g, odd, weights),
        },
        Family::PerfectMatching => match scaled(weights) {
            Some(w) => max_weight_perfect_matching(g.n(), &weighted_edges(g, &w)),
            None => max_weight_perfect_matching(g.n(), &weighted_edges(g, weights)),
        },
        Family::TwoFactor => {
            if (0..g.n()).any(|u| g.degree(u) != 3) {
                return Err(Error::Precondition(
                    "2-factor decomposition needs a cubic support".into(),
                ));
            }
            let edges: Vec<_> = (0..g.m()).map(|e| (g.edge(e).0, g.edge(e).1, -weights[e].clone())).collect();
            max_weight_perfect_matching(g.n(), &edges).map(|pm| (0..g.m()).filter(|e| !pm.contains(e)).collect())
        }
    })
}

/// Weights times the lcm of their denominators, when small enough that
/// matching duals and path sums stay far from overflow.
fn scaled(weights: &[Rational]) -> Option<Vec<i128>> {
    const BOUND: i128 = 1 << 60;
    let lcm = weights.iter().try_fold(1i128, |acc, w| {
        let d = w.denom().to_i128()?;
        let l = acc / acc.gcd(&d) * d;
        (l < BOUND).then_some(l)
    })?;
    let total = BOUND / (4 * (weights.len() as i128 + 1));
    weights
        .iter()
        .map(|w| {
            let v = w.numer().to_i128()?.checked_mul(lcm / w.denom().to_i128()?)?;
            (v.abs() < total).then_some(v)
        })
        .collect()
}

fn weighted_edges<W: Weight>(g: &Graph, w: &[W]) -> Vec<(usize, usize, W)> {
    (0..g.m()).map(|e| (g.edge(e).0, g.edge(e).1, w[e].clone())).collect()
}

/// Maximum-weight O-join via the T-join reduction: negative-cost edges are
/// flipped, then a minimum nonnegative T-join is assembled from shortest
/// paths paired by a minimum-weight perfect matching.
pub fn max_weight_ojoin<W: Weight>(g: &Graph, odd: &BTreeSet<usize>, weights: &[W]) -> Option<Vec<usize>> {
    let n = g.n();
    let cost: Vec<W> = weights.iter().map(|w| -w.clone()).collect();
    let mut in_join = vec![false; g.m()];
    let mut parity = vec![false; n];
    for &u in odd {
        parity[u] = true;
    }
    for e in 0..g.m() {
        if cost[e].is_negative() {
            in_join[e] = true;
            let (a, b) = g.edge(e);
            parity[a] ^= true;
            parity[b] ^= true;
        }
    }
    let abs: Vec<W> = cost.iter().map(|c| c.abs()).collect();
    let terminals: Vec<usize> = (0..n).filter(|&u| parity[u]).collect();
    if !terminals.is_empty() {
        let (dist, prev) = all_pairs(g, &abs, &terminals);
        let t = terminals.len();
        let mut edges = Vec::new();
        for i in 0..t {
            for j in i + 1..t {
                if let Some(d) = &dist[i][terminals[j]] {
                    edges.push((i, j, -d.clone()));
                }
            }
        }
        let pm = max_weight_perfect_matching(t, &edges)?;
        for k in pm {
            let (i, j, _) = edges[k];
            let mut u = terminals[j];
            while u != terminals[i] {
                let e = prev[i][u].unwrap();
                in_join[e] ^= true;
                u = g.other(e, u);
            }
        }
    }
    Some((0..g.m()).filter(|&e| in_join[e]).collect())
}

/// Dijkstra from every source over nonnegative costs; `prev[s][u]` is the
/// last edge on a shortest s–u path.
#[allow(clippy::type_complexity)]
fn all_pairs<W: Weight>(g: &Graph, cost: &[W], sources: &[usize]) -> (Vec<Vec<Option<W>>>, Vec<Vec<Option<usize>>>) {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let n = g.n();
    let inc = g.incidence();
    let mut dist = Vec::with_capacity(sources.len());
    let mut prev = Vec::with_capacity(sources.len());
    for &s in sources {
        let mut d: Vec<Option<W>> = vec![None; n];
        let mut pe: Vec<Option<usize>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        d[s] = Some(W::zero());
        heap.push(Reverse((W::zero(), s)));
        while let Some(Reverse((du, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &e in &inc[u] {
                let w = g.other(e, u);
                let cand = du.clone() + &cost[e];
                if !done[w] && d[w].as_ref().is_none_or(|dw| cand < *dw) {
                    d[w] = Some(cand.clone());
                    pe[w] = Some(e);
                    heap.push(Reverse((cand, w)));
                }
            }
        }
        dist.push(d);
        prev.push(pe);
    }
    (dist, prev)
}

/// Every member of the family on `g`, in deterministic order.
pub fn enumerate_family(g: &Graph, family: &Family) -> Result<Vec<Vec<usize>>> {
    Ok(match family {
        Family::RainbowVTree(spec) => all_rainbow_vtrees(g, spec.v, &spec.parts),
        Family::OJoin(odd) => all_ojoins(g, odd)?,
        Family::PerfectMatching => all_perfect_matchings(g),
        Family::TwoFactor => all_two_factors(g),
    })
}

/// All O-joins: one particular join XOR every element of the cycle space.
pub fn all_ojoins(g: &Graph, odd: &BTreeSet<usize>) -> Result<Vec<Vec<usize>>> {
    let zero_w = vec![zero(); g.m()];
    let Some(base) = max_weight_ojoin(g, odd, &zero_w) else {
        return Ok(Vec::new());
    };
    let mut uf = UnionFind::new(g.n());
    let mut tree = vec![false; g.m()];
    for e in 0..g.m() {
        let (a, b) = g.edge(e);
        if uf.union(a, b) {
            tree[e] = true;
        }
    }
    let nontree: Vec<usize> = (0..g.m()).filter(|&e| !tree[e]).collect();
    if nontree.len() > 22 {
        return Err(Error::TooLarge(format!("cycle space of dimension {}", nontree.len())));
    }
    // fundamental cycles
    let tree_edges: Vec<usize> = (0..g.m()).filter(|&e| tree[e]).collect();
    let (tg, tmap) = g.edge_subgraph(&tree_edges);
    let cycles: Vec<Vec<bool>> = nontree
        .iter()
        .map(|&e| {
            let (a, b) = g.edge(e);
            let mut c = vec![false; g.m()];
            c[e] = true;
            for te in tree_path(&tg, a, b) {
                c[tmap[te]] ^= true;
            }
            c
        })
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << cycles.len()) {
        let mut j = vec![false; g.m()];
        for &e in &base {
            j[e] = true;
        }
        for (i, c) in cycles.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for e in 0..g.m() {
                    j[e] ^= c[e];
                }
            }
        }
        out.push((0..g.m()).filter(|&e| j[e]).collect());
    }
    out.sort();
    Ok(out)
}

fn tree_path(t: &Graph, a: usize, b: usize) -> Vec<usize> {
    let inc = t.incidence();
    let mut via: Vec<Option<usize>> = vec![None; t.n()];
    let mut seen = vec![false; t.n()];
    let mut stack = vec![a];
    seen[a] = true;
    while let Some(u) = stack.pop() {
        for &e in &inc[u] {
            let w = t.other(e, u);
            if !seen[w] {
                seen[w] = true;
                via[w] = Some(e);
                stack.push(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut u = b;
    while u != a {
        let e = via[u].expect("tree path exists");
        path.push(e);
        u = t.other(e, u);
    }
    path
}

pub fn all_perfect_matchings(g: &Graph) -> Vec<Vec<usize>> {
    fn rec(g: &Graph, inc: &[Vec<usize>], covered: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(u) = (0..g.n()).find(|&u| !covered[u]) else {
            let mut s = cur.clone();
            s.sort_unstable();
            out.push(s);
            return;
        };
        for &e in &inc[u] {
            let w = g.other(e, u);
            if !covered[w] {
                covered[u] = true;
                covered[w] = true;
                cur.push(e);
                rec(g, inc, covered, cur, out);
                cur.pop();
                covered[u] = false;
                covered[w] = false;
            }
        }
    }
    let inc = g.incidence();
    let mut out = Vec::new();
    rec(g, &inc, &mut vec![false; g.n()], &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All spanning 2-regular edge subsets.
pub fn all_two_factors(g: &Graph) -> Vec<Vec<usize>> {
    fn rec(g: &Graph, e: usize, deg: &mut Vec<u8>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if e == g.m() {
            if deg.iter().all(|&d| d == 2) {
                out.push(cur.clone());
            }
            return;
        }
        let (a, b) = g.edge(e);
        if deg[a] < 2 && deg[b] < 2 {
            deg[a] += 1;
            deg[b] += 1;
            cur.push(e);
            rec(g, e + 1, deg, cur, out);
            cur.pop();
            deg[a] -= 1;
            deg[b] -= 1;
        }
        rec(g, e + 1, deg, cur, out);
    }
    let mut out = Vec::new();
    rec(g, 0, &mut vec![0; g.n()], &mut Vec::new(), &mut out);
    out
}

/// O-join decomposition of `z`, requiring z(δ(u)) ≤ 1 everywhere so that
/// every join meets each vertex of O exactly once.
pub fn ojoin_with_degree_cap(g: &Graph, z: &EdgeVector, odd: &BTreeSet<usize>) -> Result<ConvexCombination> {
    let inc = g.incidence();
    for (u, edges) in inc.iter().enumerate() {
        let load = z.sum_over(edges);
        if load > Rational::one() {
            return Err(Error::Input(format!(
                "z(delta({u})) = {} exceeds 1",
                fmt_rat(&load)
            )));
        }
    }
    let out = decompose(
        g,
        &DecompRequest {
            target: z.clone(),
            family: Family::OJoin(odd.clone()),
        },
    )?;
    for (_, j) in &out.terms {
        for &u in odd {
            if j.degree(g, u) != 1 {
                return Err(Error::Internal(format!("join meets vertex {u} more than once")));
            }
        }
    }
    Ok(out)
}

/// Exact x(P) sums for a rainbow spec, for precondition reports.
pub fn part_loads(target: &EdgeVector, spec: &RainbowSpec) -> Vec<Rational> {
    spec.parts.iter().map(|p| target.sum_over(p)).collect()
}

pub fn all_zero(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn cycle4() -> Graph {
        Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn empty_join_is_a_member() {
        let g = cycle4();
        let req = DecompRequest {
            target: EdgeVector::constant(4, rat(1, 2)),
            family: Family::OJoin(BTreeSet::new()),
        };
        let c = decompose(&g, &req).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.terms.iter().all(|(l, _)| *l == rat(1, 2)));
    }

    #[test]
    fn zero_target_on_empty_odd_set() {
        let g = cycle4();
        let c = ojoin_with_degree_cap(&g, &EdgeVector::zeros(4), &BTreeSet::new()).unwrap();
        assert_eq!(c.terms, vec![(one(), Multigraph::empty(4))]);
    }

    #[test]
    fn ojoin_oracle_matches_enumeration() {
        let g = Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (1, 3)]).unwrap();
        let odd: BTreeSet<usize> = [0, 3].into_iter().collect();
        let w = vec![rat(1, 2), rat(-3, 2), rat(2, 3), int(1), rat(-1, 4), rat(5, 4), rat(-2, 1)];
        let best = max_weight_ojoin(&g, &odd, &w).unwrap();
        let score = |s: &[usize]| s.iter().fold(zero(), |a, &e| a + &w[e]);
        let all = all_ojoins(&g, &odd).unwrap();
        assert_eq!(score(&best), all.iter().map(|s| score(s)).max().unwrap());
    }

}
