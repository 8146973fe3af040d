//! Exact minimum cuts and small-cut enumeration.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::graph::{EdgeVector, Graph, UnionFind};
use crate::rational::{zero, Rational};

/// Exact global minimum of w(δ(U)) over nonempty U ⊊ V, by Stoer–Wagner.
/// Returns 0 when the support of `w` is disconnected.
pub fn min_cut_value(host: &Graph, w: &EdgeVector) -> Rational {
    min_cut(host, w).0
}

/// Minimum cut value together with one minimizing side.
pub fn min_cut(host: &Graph, w: &EdgeVector) -> (Rational, Vec<usize>) {
    let n = host.n();
    if n < 2 {
        return (zero(), Vec::new());
    }
    let mut adj = vec![vec![zero(); n]; n];
    for (e, &(u, v)) in host.edges().iter().enumerate() {
        adj[u][v] += &w.0[e];
        adj[v][u] += &w.0[e];
    }
    let mut members: Vec<Vec<usize>> = (0..n).map(|u| vec![u]).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut best: Option<(Rational, Vec<usize>)> = None;
    while alive.len() > 1 {
        let mut in_a = vec![false; n];
        let mut conn = vec![zero(); n];
        let mut prev = alive[0];
        let mut last = alive[0];
        for step in 0..alive.len() {
            let next = if step == 0 {
                alive[0]
            } else {
                *alive
                    .iter()
                    .filter(|&&u| !in_a[u])
                    .max_by(|&&a, &&b| conn[a].cmp(&conn[b]).then(b.cmp(&a)))
                    .unwrap()
            };
            in_a[next] = true;
            prev = last;
            last = next;
            for &u in &alive {
                if !in_a[u] {
                    let add = adj[next][u].clone();
                    conn[u] += add;
                }
            }
        }
        let phase = conn[last].clone();
        if best.as_ref().is_none_or(|(b, _)| phase < *b) {
            let mut side = members[last].clone();
            side.sort_unstable();
            best = Some((phase, side));
        }
        let moved = std::mem::take(&mut members[last]);
        members[prev].extend(moved);
        for &u in &alive {
            if u != last && u != prev {
                let add = adj[last][u].clone();
                adj[prev][u] += &add;
                adj[u][prev] += add;
            }
        }
        alive.retain(|&u| u != last);
    }
    best.unwrap()
}

/// Brute-force minimum cut over all 2^(n-1) - 1 sides; for cross-checks.
pub fn min_cut_value_brute(host: &Graph, w: &EdgeVector) -> Rational {
    let n = host.n();
    assert!(n <= 20, "brute-force min cut limited to 20 vertices");
    let mut best: Option<Rational> = None;
    for mask in 1u32..(1u32 << (n - 1)) {
        let mut val = Rational::zero();
        for (e, &(u, v)) in host.edges().iter().enumerate() {
            if (mask >> u & 1) != (mask >> v & 1) {
                val += &w.0[e];
            }
        }
        if best.as_ref().is_none_or(|b| val < *b) {
            best = Some(val);
        }
    }
    best.unwrap_or_else(zero)
}

/// Side of a cut in canonical form: the side containing vertex 0, sorted.
pub fn canonical_side(n: usize, side: &BTreeSet<usize>) -> Vec<usize> {
    if side.contains(&0) {
        side.iter().copied().collect()
    } else {
        (0..n).filter(|u| !side.contains(u)).collect()
    }
}

pub fn complement(n: usize, side: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; n];
    for &u in side {
        mark[u] = true;
    }
    (0..n).filter(|&u| !mark[u]).collect()
}

pub fn side_mask(n: usize, side: &[usize]) -> Vec<bool> {
    let mut mark = vec![false; n];
    for &u in side {
        mark[u] = true;
    }
    mark
}

/// Every proper cut (both sides of size at least 2) crossed by at most `k`
/// host edges, one canonical side each, in lexicographic order.
pub fn enumerate_cuts_upto(host: &Graph, k: usize) -> Vec<Vec<usize>> {
    let n = host.n();
    let m = host.m();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut removed: Vec<usize> = Vec::with_capacity(k);
    let mut gone = vec![false; m];
    subsets(host, k, 0, &mut removed, &mut gone, &mut found);
    found
        .into_iter()
        .filter(|s| s.len() >= 2 && n - s.len() >= 2)
        .filter(|s| host.cut_edges(&side_mask(n, s)).len() <= k)
        .collect()
}

fn subsets(
    host: &Graph,
    k: usize,
    start: usize,
    removed: &mut Vec<usize>,
    gone: &mut [bool],
    found: &mut BTreeSet<Vec<usize>>,
) {
    if !removed.is_empty() {
        let n = host.n();
        let mut uf = UnionFind::new(n);
        for (e, &(u, v)) in host.edges().iter().enumerate() {
            if !gone[e] {
                uf.union(u, v);
            }
        }
        let mut roots: Vec<usize> = (0..n).map(|u| uf.find(u)).collect();
        let mut ids: Vec<usize> = roots.clone();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() > 1 && ids.len() <= 12 {
            for r in roots.iter_mut() {
                *r = ids.binary_search(r).unwrap();
            }
            // unions of components that contain component of vertex 0
            let c0 = roots[0];
            for mask in 0u32..(1u32 << ids.len()) {
                if mask >> c0 & 1 == 0 || mask == (1u32 << ids.len()) - 1 {
                    continue;
                }
                let side: Vec<usize> = (0..n).filter(|&u| mask >> roots[u] & 1 == 1).collect();
                found.insert(side);
            }
        }
    }
    if removed.len() == k {
        return;
    }
    for e in start..host.m() {
        removed.push(e);
        gone[e] = true;
        subsets(host, k, e + 1, removed, gone, found);
        gone[e] = false;
        removed.pop();
    }
}
