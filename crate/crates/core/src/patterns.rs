//! Patterns of tours around a vertex, pattern profiles, doubled-edge
//! frequencies, and the linear system relating them.

use std::fmt;

use num_traits::{One, Zero};

use crate::cyclic::CyclicPoint;
use crate::error::{Error, Result};
use crate::graph::{ConvexCombination, EdgeVector, Multigraph};
use crate::rational::{fmt_rat, one, Rational};

/// Multiplicities of (e_u, f_u, g_u) in a tour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub e: u32,
    pub f: u32,
    pub g: u32,
}

const fn pat(e: u32, f: u32, g: u32) -> Pattern {
    Pattern { e, f, g }
}

/// The eight admissible patterns, in the fixed profile order.
pub const PATTERNS: [Pattern; 8] = [
    pat(2, 0, 0),
    pat(1, 1, 0),
    pat(1, 0, 1),
    pat(2, 2, 0),
    pat(2, 0, 2),
    pat(2, 1, 1),
    pat(1, 2, 1),
    pat(1, 1, 2),
];

impl Pattern {
    pub fn index(&self) -> Option<usize> {
        PATTERNS.iter().position(|p| p == self)
    }

    pub fn mult(&self, k: usize) -> u32 {
        [self.e, self.f, self.g][k]
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, k) in [("e", self.e), ("f", self.f), ("g", self.g)] {
            match k {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{k}{name}")),
            }
        }
        write!(out, "{{{}}}", parts.join(","))
    }
}

pub type Profile = [Rational; 8];

/// Host edges (e_u, f_u, g_u) labelling δ(u) in a cubic point.
pub fn labels(p: &CyclicPoint, u: usize) -> [usize; 3] {
    let (f, g) = p.fractional_at(u);
    [p.e_of(u), f, g]
}

pub fn pattern_at(f: &Multigraph, lab: [usize; 3]) -> Pattern {
    pat(f.mult[lab[0]], f.mult[lab[1]], f.mult[lab[2]])
}

pub fn pattern_of(p: &CyclicPoint, f: &Multigraph, u: usize) -> Result<Pattern> {
    let q = pattern_at(f, labels(p, u));
    if q.index().is_none() {
        return Err(Error::Precondition(format!("tour has pattern {q} at vertex {u}, not admissible")));
    }
    Ok(q)
}

pub fn profile_at(c: &ConvexCombination, lab: [usize; 3]) -> Result<Profile> {
    let mut out: Profile = Default::default();
    for (i, (lam, f)) in c.terms.iter().enumerate() {
        let q = pattern_at(f, lab);
        let k = q
            .index()
            .ok_or_else(|| Error::Precondition(format!("term {i} has pattern {q}, not admissible")))?;
        out[k] += lam;
    }
    Ok(out)
}

pub fn profile_of(p: &CyclicPoint, c: &ConvexCombination, u: usize) -> Result<Profile> {
    profile_at(c, labels(p, u)).map_err(|e| match e {
        Error::Precondition(s) => Error::Precondition(format!("{s} (vertex {u})")),
        other => other,
    })
}

/// Frequency of tours doubling each edge.
pub fn phi2(c: &ConvexCombination, m: usize) -> EdgeVector {
    let mut out = EdgeVector::zeros(m);
    for (lam, f) in &c.terms {
        for e in 0..m {
            if f.mult[e] == 2 {
                out.0[e] += lam;
            }
        }
    }
    out
}

/// True when every term is a handpicked tour of the point.
pub fn is_handpicked(p: &CyclicPoint, f: &Multigraph) -> bool {
    crate::graph::is_tour(&p.graph, f) && (0..p.n()).all(|u| pattern_of(p, f, u).is_ok())
}

pub fn fmt_profile(pr: &Profile) -> String {
    PATTERNS
        .iter()
        .zip(pr.iter())
        .map(|(q, v)| format!("{q}={}", fmt_rat(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Solution set of the eight pattern equations: a particular solution plus
/// a basis of the null space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSolution {
    pub rank: usize,
    pub particular: Profile,
    pub null_space: Vec<Profile>,
}

impl PatternSolution {
    /// Coordinates that take the same value in every solution.
    pub fn forced(&self) -> Vec<Option<Rational>> {
        (0..8)
            .map(|k| {
                self.null_space
                    .iter()
                    .all(|d| d[k].is_zero())
                    .then(|| self.particular[k].clone())
            })
            .collect()
    }

    pub fn contains(&self, pr: &Profile) -> bool {
        // pr − particular must lie in the span of the null space
        let diff: Vec<Rational> = (0..8).map(|k| &pr[k] - &self.particular[k]).collect();
        let mut rows: Vec<Vec<Rational>> = (0..8)
            .map(|k| {
                let mut r: Vec<Rational> = self.null_space.iter().map(|d| d[k].clone()).collect();
                r.push(diff[k].clone());
                r
            })
            .collect();
        let cols = self.null_space.len();
        rref(&mut rows, cols).is_some()
    }
}

/// The eight equations: doubled and single copies of e, f, g, the sum, and
/// φ({2e}) = ζ. Rows are [coefficients..., rhs].
pub fn pattern_equations(y: &[Rational; 3], q: &[Rational; 3], zeta: &Rational) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for k in 0..3 {
        let mut two: Vec<Rational> = PATTERNS.iter().map(|p| Rational::from_integer((p.mult(k) == 2).into())).collect();
        two.push(q[k].clone());
        rows.push(two);
        let mut single: Vec<Rational> = PATTERNS.iter().map(|p| Rational::from_integer((p.mult(k) == 1).into())).collect();
        single.push(&y[k] - &q[k] * Rational::from_integer(2.into()));
        rows.push(single);
    }
    let mut sum = vec![one(); 8];
    sum.push(one());
    rows.push(sum);
    let mut z = vec![Rational::zero(); 8];
    z[0] = one();
    z.push(zeta.clone());
    rows.push(z);
    rows
}

/// Exact reduced row echelon form over `cols` unknowns with the right-hand
/// side in the last column. Returns pivot columns, or `None` if
/// inconsistent.
fn rref(rows: &mut [Vec<Rational>], cols: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, i);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..=cols {
                    let d = &factor * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some(pivots)
}

pub fn solve_pattern_system(y: &[Rational; 3], q: &[Rational; 3], zeta: &Rational) -> Result<PatternSolution> {
    let mut rows = pattern_equations(y, q, zeta);
    let pivots = rref(&mut rows, 8).ok_or_else(|| Error::Infeasible("pattern equations are inconsistent".into()))?;
    let mut particular: Profile = Default::default();
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = rows[r][8].clone();
    }
    let mut null_space = Vec::new();
    for free in (0..8).filter(|c| !pivots.contains(c)) {
        let mut d: Profile = Default::default();
        d[free] = one();
        for (r, &c) in pivots.iter().enumerate() {
            d[c] = -rows[r][free].clone();
        }
        null_space.push(d);
    }
    Ok(PatternSolution { rank: pivots.len(), particular, null_space })
}

/// Residuals of the eight equations for a measured profile.
pub fn equation_residuals(pr: &Profile, y: &[Rational; 3], q: &[Rational; 3], zeta: &Rational) -> Vec<Rational> {
    pattern_equations(y, q, zeta)
        .iter()
        .map(|row| {
            let lhs = (0..8).fold(Rational::zero(), |acc, k| acc + &row[k] * &pr[k]);
            lhs - &row[8]
        })
        .collect()
}
