//! Parity vectors z^i, certificates of O-join membership, and parity
//! correctors for connectors.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::cuts::{enumerate_cuts_upto, side_mask};
use crate::cyclic::{critical_cuts, CyclicPoint};
use crate::decomp::ojoin_with_degree_cap;
use crate::error::{Error, Result};
use crate::graph::{ConvexCombination, EdgeVector, Multigraph};
use crate::rational::{fmt_rat, half, int, one, Rational};

/// Above this many vertices membership is certified through the parity-vector
/// hypotheses instead of enumerating every cut.
pub const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityVector {
    pub z: EdgeVector,
    pub m: Vec<usize>,
}

/// z = 1/2 on W∖M, (1−θ)/2 on M, x/2 on H.
pub fn parity_vector(p: &CyclicPoint, m: &[usize]) -> Result<ParityVector> {
    for &e in m {
        if e >= p.m() || !p.is_w[e] {
            return Err(Error::Input(format!("edge {e} is not a 1-edge")));
        }
    }
    let z = (0..p.m())
        .map(|e| {
            if m.contains(&e) {
                (one() - &p.theta) * half()
            } else {
                p.x.get(e) * half()
            }
        })
        .collect();
    Ok(ParityVector { z: EdgeVector(z), m: m.to_vec() })
}

/// A violated O-join inequality z(δ(U)∖A) − z(A) ≥ 1 − |A|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutWitness {
    pub side: Vec<usize>,
    pub a: Vec<usize>,
    pub slack: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Every inequality checked over all cuts.
    Exhaustive { cuts: usize },
    /// The parity-vector hypotheses hold, which imply every inequality.
    Hypotheses,
}

/// Minimum over A ⊆ δ(U) with |U∩O| + |A| odd of
/// z(δ(U)∖A) − z(A) − (1 − |A|), with a minimising A.
fn worst_a(z: &EdgeVector, cut: &[usize], need_odd_a: bool) -> (Rational, Vec<usize>) {
    let mut total = -one();
    let mut a = Vec::new();
    let mut best_flip: Option<(Rational, usize)> = None;
    for &e in cut {
        let out = z.get(e).clone();
        let inn = one() - z.get(e);
        if inn < out {
            total += &inn;
            a.push(e);
        } else {
            total += &out;
        }
        let gap = (&out - &inn).abs();
        if best_flip.as_ref().is_none_or(|(g, _)| gap < *g) {
            best_flip = Some((gap, e));
        }
    }
    if (a.len() % 2 == 1) != need_odd_a {
        match best_flip {
            Some((gap, e)) => {
                total += gap;
                if let Some(i) = a.iter().position(|&x| x == e) {
                    a.remove(i);
                } else {
                    a.push(e);
                    a.sort_unstable();
                }
            }
            None => return (Rational::zero(), a),
        }
    }
    (total, a)
}

/// Checks every O-join inequality by enumerating vertex sets containing
/// vertex 0.
pub fn exhaustive_ojoin_check(p: &CyclicPoint, z: &EdgeVector, odd: &BTreeSet<usize>) -> std::result::Result<usize, CutWitness> {
    let n = p.n();
    let g = &p.graph;
    let mut count = 0;
    for mask in 0u64..(1u64 << (n - 1)) {
        let side_bits: Vec<bool> = (0..n).map(|u| u == 0 || (mask >> (u - 1)) & 1 == 1).collect();
        if side_bits.iter().all(|&b| b) {
            continue;
        }
        count += 1;
        let cut = g.cut_edges(&side_bits);
        let inside_odd = odd.iter().filter(|&&u| side_bits[u]).count();
        let (slack, a) = worst_a(z, &cut, inside_odd % 2 == 0);
        if slack.is_negative() {
            let side = (0..n).filter(|&u| side_bits[u]).collect();
            return Err(CutWitness { side, a, slack });
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("|O| is odd")]
    OddSize,
    #[error("vertex {0} of O is an endpoint of a matching edge")]
    MatchedVertexOdd(usize),
    #[error("point has a critical cut")]
    CriticalCut,
    #[error("3-edge cut {0:?} meets the matching more than once")]
    ThreeCut(Vec<usize>),
    #[error("2-edge cut {0:?} has odd parity")]
    TwoCut(Vec<usize>),
    #[error("z is not the parity vector of the given matching")]
    WrongVector,
    #[error("inequality violated on U = {:?}, A = {:?} (slack {})", .0.side, .0.a, fmt_rat(&.0.slack))]
    Violated(CutWitness),
}

/// Checks the hypotheses under which z lies in the O-join polytope.
pub fn check_hypotheses(p: &CyclicPoint, pv: &ParityVector, odd: &BTreeSet<usize>) -> std::result::Result<(), CertifyError> {
    if odd.len() % 2 == 1 {
        return Err(CertifyError::OddSize);
    }
    if parity_vector(p, &pv.m).map(|q| q.z != pv.z).unwrap_or(true) {
        return Err(CertifyError::WrongVector);
    }
    for &e in &pv.m {
        let (s, t) = p.graph.edge(e);
        for u in [s, t] {
            if odd.contains(&u) {
                return Err(CertifyError::MatchedVertexOdd(u));
            }
        }
    }
    if !critical_cuts(p).is_empty() {
        return Err(CertifyError::CriticalCut);
    }
    let n = p.n();
    for side in enumerate_cuts_upto(&p.graph, 3) {
        let mask = side_mask(n, &side);
        let cut = p.graph.cut_edges(&mask);
        let in_m = cut.iter().filter(|e| pv.m.contains(e)).count();
        if cut.len() == 3 && in_m > 1 {
            return Err(CertifyError::ThreeCut(side));
        }
        if cut.len() == 2 {
            let inside = odd.iter().filter(|&&u| mask[u]).count();
            if inside % 2 == 1 || in_m % 2 == 1 {
                return Err(CertifyError::TwoCut(side));
            }
        }
    }
    Ok(())
}

/// Certifies z ∈ O-Join(G): exhaustively for small n, otherwise through the
/// parity-vector hypotheses.
pub fn certify_ojoin_membership(p: &CyclicPoint, pv: &ParityVector, odd: &BTreeSet<usize>) -> std::result::Result<Certificate, CertifyError> {
    if odd.len() % 2 == 1 {
        return Err(CertifyError::OddSize);
    }
    if p.n() <= EXHAUSTIVE_LIMIT {
        if pv.z.0.iter().any(|v| v.is_negative() || *v > Rational::one()) {
            return Err(CertifyError::WrongVector);
        }
        return exhaustive_ojoin_check(p, &pv.z, odd)
            .map(|cuts| Certificate::Exhaustive { cuts })
            .map_err(CertifyError::Violated);
    }
    check_hypotheses(p, pv, odd).map(|_| Certificate::Hypotheses)
}

/// O_T-join decomposition of z for connector T; every join meets each odd
/// vertex of T exactly once. Membership is certified through the parity-vector
/// hypotheses; the decomposition itself is verified exactly.
pub fn parity_correct(p: &CyclicPoint, t: &Multigraph, pv: &ParityVector) -> Result<ConvexCombination> {
    let odd: BTreeSet<usize> = t.odd_vertices(&p.graph).into_iter().collect();
    for (u, edges) in p.graph.incidence().iter().enumerate() {
        let load = pv.z.sum_over(edges);
        if load > one() {
            return Err(Error::Internal(format!("z(delta({u})) = {} exceeds 1", fmt_rat(&load))));
        }
    }
    if let Err(e) = check_hypotheses(p, pv, &odd) {
        return Err(Error::Infeasible(format!("parity vector not in the O-join polytope: {e}")));
    }
    ojoin_with_degree_cap(&p.graph, &pv.z, &odd)
}

/// z(δ(u)) for every vertex.
pub fn vertex_loads(p: &CyclicPoint, z: &EdgeVector) -> Vec<Rational> {
    p.graph.incidence().iter().map(|edges| z.sum_over(edges)).collect()
}

/// 1 − θ/2 at matching endpoints and 1 elsewhere.
pub fn expected_load(p: &CyclicPoint, m: &[usize], u: usize) -> Rational {
    if m.contains(&p.e_of(u)) {
        one() - &p.theta / int(2)
    } else {
        one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::k4half;
    use crate::rational::rat;

    #[test]
    fn k4half_vector() {
        let p = k4half();
        let pv = parity_vector(&p, &[4]).unwrap();
        assert_eq!(pv.z.0, vec![rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 2)]);
        let empty = parity_vector(&p, &[]).unwrap();
        assert_eq!(empty.z, p.x.scale(&half()));
        for u in 0..4 {
            assert_eq!(vertex_loads(&p, &pv.z)[u], expected_load(&p, &[4], u));
        }
    }

    #[test]
    fn k4half_certified() {
        let p = k4half();
        let pv = parity_vector(&p, &[4]).unwrap();
        let cert = certify_ojoin_membership(&p, &pv, &BTreeSet::new()).unwrap();
        assert_eq!(cert, Certificate::Exhaustive { cuts: 7 });
    }

    #[test]
    fn detects_violation() {
        let p = k4half();
        // full weight on both 1-edges, O = {0, 1}: U = {0, 1, 2} with A = {13} fails
        let mut pv = parity_vector(&p, &[]).unwrap();
        pv.z.0 = vec![Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero(), one(), one()];
        let odd: BTreeSet<usize> = [0, 1].into_iter().collect();
        let err = certify_ojoin_membership(&p, &pv, &odd).unwrap_err();
        assert!(matches!(err, CertifyError::Violated(_)));
    }
}
