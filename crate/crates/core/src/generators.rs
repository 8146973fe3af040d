//! Instance generators.

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclic::{validate_cyclic, CyclicPoint};
use crate::error::{Error, Result};
use crate::graph::{EdgeVector, Graph};
use crate::rational::{half, one, Rational};

/// K4 with 1-edges 02 and 13 and the 4-cycle 0-1-2-3 at 1/2.
pub fn k4half() -> CyclicPoint {
    let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)]).unwrap();
    let h = half();
    let x = EdgeVector(vec![h.clone(), h.clone(), h.clone(), h, one(), one()]);
    validate_cyclic(&half(), &g, &x).unwrap()
}

/// Two triangles of 1/2-edges whose corners are joined by three paths of
/// 1-edges, each path having ⌈1/ε + 1⌉ vertices.
pub fn lower_bound(eps: &Rational) -> Result<CyclicPoint> {
    if *eps <= Rational::from_integer(0.into()) || *eps >= one() {
        return Err(Error::Input("eps must lie in (0, 1)".into()));
    }
    let inv = one() / eps + one();
    let k = inv.ceil().to_integer();
    let k: usize = k
        .try_into()
        .map_err(|_| Error::Input("eps too small".into()))?;
    let k = k.max(2);
    // corners a0,a1,a2 = 0,1,2 and b0,b1,b2 = 3,4,5; interiors follow
    let mut edges = vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
    let mut x = vec![half(); 6];
    let mut next = 6;
    for i in 0..3 {
        let mut prev = i;
        for _ in 0..k - 2 {
            edges.push((prev, next));
            x.push(one());
            prev = next;
            next += 1;
        }
        edges.push((prev, 3 + i));
        x.push(one());
    }
    let g = Graph::new(next, edges)?;
    validate_cyclic(&half(), &g, &EdgeVector(x))
}

pub fn k4_graph() -> Graph {
    Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)]).unwrap()
}

/// K_{2,2,2}: vertex pairs {0,1}, {2,3}, {4,5} are the non-edges.
pub fn octahedron() -> Graph {
    let mut edges = Vec::new();
    for u in 0..6 {
        for v in u + 1..6 {
            if u / 2 != v / 2 {
                edges.push((u, v));
            }
        }
    }
    Graph::new(6, edges).unwrap()
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, edges).unwrap()
}

/// Triangular prism: a Hamiltonian cubic graph on six vertices.
pub fn prism() -> Graph {
    Graph::new(
        6,
        vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
    )
    .unwrap()
}

/// Random cubic cyclic point on `n` vertices: a random 2-factor of
/// fractional cycles (even lengths unless θ = 1/2) plus a random perfect
/// matching of 1-edges, resampled until valid.
pub fn random_cyclic(n: usize, theta: &Rational, seed: u64) -> Result<CyclicPoint> {
    if n < 4 || n.is_odd() {
        return Err(Error::Input("random-cyclic needs an even n >= 4".into()));
    }
    if *theta <= Rational::from_integer(0.into()) || *theta > half() {
        return Err(Error::Input("theta must lie in (0, 1/2]".into()));
    }
    let odd_ok = *theta == half();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        if let Some(p) = attempt(n, theta, odd_ok, &mut rng) {
            return Ok(p);
        }
    }
    Err(Error::NotFound("no valid random cyclic point after 10000 draws".into()))
}

fn attempt(n: usize, theta: &Rational, odd_ok: bool, rng: &mut ChaCha8Rng) -> Option<CyclicPoint> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let min_len = if odd_ok { 3 } else { 4 };
    let mut lens = Vec::new();
    let mut left = n;
    while left > 0 {
        if left < 2 * min_len {
            lens.push(left);
            break;
        }
        let mut l = rng.gen_range(min_len..=left - min_len);
        if !odd_ok && l % 2 == 1 {
            l -= 1;
        }
        lens.push(l);
        left -= l;
    }
    if !odd_ok && lens.iter().any(|l| l % 2 == 1) {
        return None;
    }
    let mut edges = Vec::new();
    let mut x = Vec::new();
    let mut pos = 0;
    for &l in &lens {
        let cyc = &order[pos..pos + l];
        for i in 0..l {
            edges.push((cyc[i], cyc[(i + 1) % l]));
            x.push(if i % 2 == 0 { theta.clone() } else { one() - theta });
        }
        pos += l;
    }
    let mut rest: Vec<usize> = (0..n).collect();
    rest.shuffle(rng);
    let adjacent = |a: usize, b: usize, es: &[(usize, usize)]| {
        es.iter().any(|&(u, v)| (u == a && v == b) || (u == b && v == a))
    };
    let mut unmatched = rest;
    let mut w = Vec::new();
    while let Some(a) = unmatched.pop() {
        let idx = unmatched.iter().position(|&b| !adjacent(a, b, &edges))?;
        let b = unmatched.remove(idx);
        w.push((a, b));
    }
    for (a, b) in w {
        edges.push((a.min(b), a.max(b)));
        x.push(one());
    }
    let g = Graph::new(n, edges).ok()?;
    validate_cyclic(theta, &g, &EdgeVector(x)).ok()
}

/// Replaces random 1-edges by paths of 1-edges, yielding a subcubic point.
pub fn subdivide_ones(p: &CyclicPoint, extra: usize, seed: u64) -> CyclicPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = p.graph.edges().to_vec();
    let mut x = p.x.0.clone();
    let mut n = p.n();
    for _ in 0..extra {
        let ws: Vec<usize> = (0..edges.len()).filter(|&e| x[e] == one()).collect();
        let e = ws[rng.gen_range(0..ws.len())];
        let (a, b) = edges[e];
        edges[e] = (a, n);
        edges.push((n, b));
        x.push(one());
        n += 1;
    }
    let g = Graph::new(n, edges).unwrap();
    validate_cyclic(&p.theta, &g, &EdgeVector(x)).expect("subdividing 1-edges keeps validity")
}
