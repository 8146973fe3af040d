//! Brute-force membership oracle: enumerates every connected spanning
//! Eulerian multigraph with multiplicities at most two on the support of a
//! vector and decides exactly whether the vector is a convex combination of
//! them. Shares no code with the constructions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeVector, Graph, Multigraph, UnionFind};
use crate::rational::{int, Rational};

/// Largest instance the oracle accepts.
pub const ORACLE_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Feasible { tours: usize, weights: Vec<(Rational, Multigraph)> },
    Infeasible { tours: usize },
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible { .. })
    }
}

/// All connected spanning Eulerian multigraphs with multiplicities in
/// {0, 1, 2} on the given edges.
pub fn enumerate_tours(g: &Graph, edges: &[usize]) -> Vec<Multigraph> {
    let n = g.n();
    // vertex u is settled once its last incident edge in `edges` is fixed
    let mut last = vec![None; n];
    for (i, &e) in edges.iter().enumerate() {
        let (a, b) = g.edge(e);
        last[a] = Some(i);
        last[b] = Some(i);
    }
    if last.iter().any(|l| l.is_none()) && n > 1 {
        return Vec::new();
    }
    let mut settle: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for (u, l) in last.iter().enumerate() {
        if let Some(i) = l {
            settle[*i].push(u);
        }
    }
    let mut deg = vec![0u32; n];
    let mut cur = Multigraph::empty(g.m());
    let mut out = Vec::new();
    walk(g, edges, &settle, 0, &mut deg, &mut cur, &mut out);
    out
}

fn walk(g: &Graph, edges: &[usize], settle: &[Vec<usize>], i: usize, deg: &mut [u32], cur: &mut Multigraph, out: &mut Vec<Multigraph>) {
    if i == edges.len() {
        if spanning_connected(g, cur) {
            out.push(cur.clone());
        }
        return;
    }
    let e = edges[i];
    let (a, b) = g.edge(e);
    for k in 0..=2u32 {
        cur.mult[e] = k;
        deg[a] += k;
        deg[b] += k;
        if settle[i].iter().all(|&u| deg[u] % 2 == 0 && deg[u] > 0) {
            walk(g, edges, settle, i + 1, deg, cur, out);
        }
        deg[a] -= k;
        deg[b] -= k;
    }
    cur.mult[e] = 0;
}

fn spanning_connected(g: &Graph, f: &Multigraph) -> bool {
    let mut uf = UnionFind::new(g.n());
    let mut parts = g.n();
    for (e, &k) in f.mult.iter().enumerate() {
        if k > 0 {
            let (a, b) = g.edge(e);
            if uf.union(a, b) {
                parts -= 1;
            }
        }
    }
    parts <= 1
}

/// Decides whether `y` is a convex combination of tours of `g` with
/// multiplicities at most two.
pub fn oracle(g: &Graph, y: &EdgeVector) -> Result<Verdict> {
    if g.n() > ORACLE_LIMIT {
        return Err(Error::TooLarge(format!("oracle handles n <= {ORACLE_LIMIT}, got {}", g.n())));
    }
    if y.len() != g.m() {
        return Err(Error::Input("vector length differs from edge count".into()));
    }
    if y.0.iter().any(|v| v.is_negative()) {
        return Ok(Verdict::Infeasible { tours: 0 });
    }
    let support: Vec<usize> = (0..g.m()).filter(|&e| !y.0[e].is_zero()).collect();
    let tours = enumerate_tours(g, &support);
    let count = tours.len();
    let rows: Vec<usize> = support.clone();
    // columns: multiplicities on the support plus the convexity row
    let cols: Vec<Vec<Rational>> = tours
        .iter()
        .map(|f| {
            let mut c: Vec<Rational> = rows.iter().map(|&e| int(f.mult[e] as i64)).collect();
            c.push(Rational::one());
            c
        })
        .collect();
    let mut b: Vec<Rational> = rows.iter().map(|&e| y.0[e].clone()).collect();
    b.push(Rational::one());
    match phase_one(&cols, &b) {
        Some(x) => {
            let weights = x.into_iter().filter(|(_, v)| v.is_positive()).map(|(j, v)| (v, tours[j].clone())).collect();
            Ok(Verdict::Feasible { tours: count, weights })
        }
        None => Ok(Verdict::Infeasible { tours: count }),
    }
}

/// Revised phase 1 over explicit columns: finds x ≥ 0 with A x = b
/// (b ≥ 0), as (column, value) pairs of the final basis. Columns are small
/// integers, so pricing scales the duals to integers. Dantzig's rule, with
/// Bland's rule after a run of degenerate pivots.
fn phase_one(cols: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<(usize, Rational)>> {
    let r = b.len();
    let int_cols: Vec<Vec<i64>> = cols.iter().map(|c| c.iter().map(|v| v.to_integer().to_i64().unwrap_or(0)).collect()).collect();
    let integral = cols.iter().all(|c| c.iter().all(|v| v.is_integer()));
    // basis entries: structural j, or c + i for artificial i
    let c = cols.len();
    let mut basis: Vec<usize> = (c..c + r).collect();
    let mut binv: Vec<Vec<Rational>> = (0..r).map(|i| (0..r).map(|k| if i == k { Rational::one() } else { Rational::zero() }).collect()).collect();
    let mut xb: Vec<Rational> = b.to_vec();
    let mut in_basis = vec![false; c];
    let mut degenerate = 0usize;
    loop {
        let mut y = vec![Rational::zero(); r];
        for i in (0..r).filter(|&i| basis[i] >= c) {
            for k in 0..r {
                y[k] += &binv[i][k];
            }
        }
        let den = y.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let yi: Option<Vec<i128>> = y.iter().map(|v| (v.numer() * (&den / v.denom())).to_i128()).collect();
        let bland = degenerate > 50;
        let mut best: Option<(usize, Rational)> = None;
        for j in (0..c).filter(|&j| !in_basis[j]) {
            let d = match (&yi, integral) {
                (Some(yi), true) => {
                    let s: i128 = yi.iter().zip(&int_cols[j]).map(|(a, &b)| a * b as i128).sum();
                    if s <= 0 {
                        continue;
                    }
                    Rational::new(BigInt::from(s), den.clone())
                }
                _ => {
                    let s = y.iter().zip(&cols[j]).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                    if !s.is_positive() {
                        continue;
                    }
                    s
                }
            };
            if best.as_ref().is_none_or(|(_, bd)| d > *bd) {
                best = Some((j, d));
                if bland {
                    break;
                }
            }
        }
        let Some((j, _)) = best else { break };
        let col: Vec<Rational> = (0..r).map(|i| (0..r).fold(Rational::zero(), |acc, k| acc + &binv[i][k] * &cols[j][k])).collect();
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..r {
            if col[i].is_positive() {
                let ratio = &xb[i] / &col[i];
                if leave.as_ref().is_none_or(|(l, best)| ratio < *best || (ratio == *best && basis[i] < basis[*l])) {
                    leave = Some((i, ratio));
                }
            }
        }
        let (p, step) = leave?;
        degenerate = if step.is_zero() { degenerate + 1 } else { 0 };
        let piv = col[p].clone();
        for v in binv[p].iter_mut() {
            *v /= &piv;
        }
        xb[p] /= &piv;
        for i in 0..r {
            if i != p && !col[i].is_zero() {
                let f = col[i].clone();
                for k in 0..r {
                    let d = &f * &binv[p][k];
                    binv[i][k] -= d;
                }
                let d = &f * &xb[p];
                xb[i] -= d;
            }
        }
        if basis[p] < c {
            in_basis[basis[p]] = false;
        }
        basis[p] = j;
        in_basis[j] = true;
    }
    if (0..r).any(|i| basis[i] >= c && xb[i].is_positive()) {
        return None;
    }
    Some((0..r).filter(|&i| basis[i] < c).map(|i| (basis[i], xb[i].clone())).collect())
}
