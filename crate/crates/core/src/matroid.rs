//! Weighted matroid intersection for maximum-weight rainbow v-trees.
//!
//! M1 allows two edges at `v` plus a forest of G − v; M2 allows at most one
//! edge from each part. Common independent sets of size n are exactly
//! v-trees meeting every part at most once.

use num_traits::{Signed, Zero};

use crate::graph::{Graph, UnionFind};
use crate::rational::{int, zero, Rational};

struct Matroids<'a> {
    g: &'a Graph,
    v: usize,
    part_of: Vec<Option<usize>>,
}

impl Matroids<'_> {
    fn indep1(&self, set: &[usize]) -> bool {
        let mut at_v = 0;
        let mut uf = UnionFind::new(self.g.n());
        for &e in set {
            let (a, b) = self.g.edge(e);
            if a == self.v || b == self.v {
                at_v += 1;
                if at_v > 2 {
                    return false;
                }
            } else if !uf.union(a, b) {
                return false;
            }
        }
        true
    }

    fn indep2(&self, set: &[usize]) -> bool {
        let mut seen = Vec::new();
        for &e in set {
            if let Some(p) = self.part_of[e] {
                if seen.contains(&p) {
                    return false;
                }
                seen.push(p);
            }
        }
        true
    }
}

/// True when `t` is a v-tree of `g` meeting every part exactly once.
pub fn is_rainbow_vtree(g: &Graph, v: usize, parts: &[Vec<usize>], t: &[usize]) -> bool {
    if t.len() != g.n() {
        return false;
    }
    let at_v = t
        .iter()
        .filter(|&&e| {
            let (a, b) = g.edge(e);
            a == v || b == v
        })
        .count();
    if at_v != 2 {
        return false;
    }
    let mut uf = UnionFind::new(g.n());
    for &e in t {
        let (a, b) = g.edge(e);
        if a != v && b != v && !uf.union(a, b) {
            return false;
        }
    }
    parts
        .iter()
        .all(|p| p.iter().filter(|e| t.contains(e)).count() == 1)
}

/// Maximum-weight rainbow v-tree, or `None` if none exists. Ties are broken
/// deterministically.
pub fn max_weight_rainbow_vtree(
    g: &Graph,
    v: usize,
    parts: &[Vec<usize>],
    weights: &[Rational],
) -> Option<Vec<usize>> {
    let m = g.m();
    let mut part_of = vec![None; m];
    for (i, p) in parts.iter().enumerate() {
        for &e in p {
            part_of[e] = Some(i);
        }
    }
    let mats = Matroids { g, v, part_of };
    // a bonus per part edge makes hitting more parts dominate any weight gain
    let spread = weights.iter().fold(zero(), |acc, w| acc + w.abs());
    let bonus = spread * int(2) + int(1);
    let w: Vec<Rational> = (0..m)
        .map(|e| {
            if mats.part_of[e].is_some() {
                &weights[e] + &bonus
            } else {
                weights[e].clone()
            }
        })
        .collect();

    let mut in_set = vec![false; m];
    for _ in 0..g.n() {
        let current: Vec<usize> = (0..m).filter(|&e| in_set[e]).collect();
        let outside: Vec<usize> = (0..m).filter(|&e| !in_set[e]).collect();
        let with = |extra: usize| {
            let mut s = current.clone();
            s.push(extra);
            s
        };
        let swap = |out: usize, add: usize| {
            let mut s: Vec<usize> = current.iter().copied().filter(|&e| e != out).collect();
            s.push(add);
            s
        };
        let x1: Vec<bool> = (0..m).map(|e| !in_set[e] && mats.indep1(&with(e))).collect();
        let x2: Vec<bool> = (0..m).map(|e| !in_set[e] && mats.indep2(&with(e))).collect();
        let mut arcs: Vec<(usize, usize)> = Vec::new();
        for &x in &current {
            for &y in &outside {
                let s = swap(x, y);
                if mats.indep1(&s) {
                    arcs.push((x, y));
                }
                if mats.indep2(&s) {
                    arcs.push((y, x));
                }
            }
        }
        let len = |e: usize| if in_set[e] { w[e].clone() } else { -w[e].clone() };
        let mut dist: Vec<Option<(Rational, usize)>> = vec![None; m];
        let mut pred: Vec<Option<usize>> = vec![None; m];
        for e in 0..m {
            if x1[e] {
                dist[e] = Some((len(e), 0));
            }
        }
        for _ in 0..m {
            let mut changed = false;
            for &(a, b) in &arcs {
                if let Some((da, ha)) = dist[a].clone() {
                    let cand = (da + len(b), ha + 1);
                    if dist[b].as_ref().is_none_or(|cur| cand < *cur) {
                        dist[b] = Some(cand);
                        pred[b] = Some(a);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let end = (0..m)
            .filter(|&e| x2[e] && dist[e].is_some())
            .min_by(|&a, &b| dist[a].cmp(&dist[b]).then(a.cmp(&b)))?;
        let mut cur = Some(end);
        let mut guard = 0;
        while let Some(e) = cur {
            in_set[e] = !in_set[e];
            cur = if x1[e] && dist[e].as_ref().is_some_and(|d| d.1 == 0) {
                None
            } else {
                pred[e]
            };
            guard += 1;
            if guard > m + 1 {
                return None;
            }
        }
    }
    let t: Vec<usize> = (0..m).filter(|&e| in_set[e]).collect();
    is_rainbow_vtree(g, v, parts, &t).then_some(t)
}

/// All rainbow v-trees, by exhaustive search; for small graphs and tests.
pub fn all_rainbow_vtrees(g: &Graph, v: usize, parts: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let m = g.m();
    let n = g.n();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(
        g: &Graph,
        v: usize,
        parts: &[Vec<usize>],
        e: usize,
        n: usize,
        m: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if chosen.len() == n {
            if is_rainbow_vtree(g, v, parts, chosen) {
                out.push(chosen.clone());
            }
            return;
        }
        if e == m || m - e < n - chosen.len() {
            return;
        }
        chosen.push(e);
        let ok = {
            let mats_ok = {
                let mut at_v = 0;
                let mut uf = UnionFind::new(g.n());
                let mut fine = true;
                for &f in chosen.iter() {
                    let (a, b) = g.edge(f);
                    if a == v || b == v {
                        at_v += 1;
                        fine &= at_v <= 2;
                    } else {
                        fine &= uf.union(a, b);
                    }
                }
                fine
            };
            mats_ok
                && parts
                    .iter()
                    .all(|p| p.iter().filter(|x| chosen.contains(x)).count() <= 1)
        };
        if ok {
            rec(g, v, parts, e + 1, n, m, chosen, out);
        }
        chosen.pop();
        rec(g, v, parts, e + 1, n, m, chosen, out);
    }
    rec(g, v, parts, 0, n, m, &mut chosen, &mut out);
    out
}

/// Weight of an edge set.
pub fn set_weight(set: &[usize], weights: &[Rational]) -> Rational {
    set.iter().fold(Rational::zero(), |acc, &e| acc + &weights[e])
}
