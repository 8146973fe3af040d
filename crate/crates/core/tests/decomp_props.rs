use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;
use tourglue::decomp::{decompose, enumerate_family, is_member, DecompRequest, Family, RainbowSpec};
use tourglue::generators::{octahedron, petersen, prism};
use tourglue::graph::{combination_value, EdgeVector, Graph};
use tourglue::rational::{int, Rational};

/// Target from integer weights on chosen members.
fn mix(g: &Graph, members: &[Vec<usize>], picks: &[(usize, u8)]) -> EdgeVector {
    let total: i64 = picks.iter().map(|&(_, w)| w as i64).sum();
    let mut y = vec![Rational::zero(); g.m()];
    for &(i, w) in picks {
        for &e in &members[i % members.len()] {
            y[e] += Rational::new((w as i64).into(), total.into());
        }
    }
    EdgeVector(y)
}

fn round_trip(g: &Graph, family: Family, picks: &[(usize, u8)]) {
    let members = enumerate_family(g, &family).unwrap();
    let target = mix(g, &members, picks);
    let c = decompose(g, &DecompRequest { target: target.clone(), family: family.clone() }).unwrap();
    assert_eq!(combination_value(&c, g.m()), target);
    assert_eq!(c.total_weight(), int(1));
    assert!(c.terms.iter().all(|(_, f)| is_member(g, &family, f)));
}

fn picks() -> impl Strategy<Value = Vec<(usize, u8)>> {
    prop::collection::vec((0usize..1000, 1u8..10), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn perfect_matchings_of_petersen(p in picks()) {
        round_trip(&petersen(), Family::PerfectMatching, &p);
    }

    #[test]
    fn ojoins_of_prism(p in picks(), odd in prop::sample::subsequence((0..6).collect::<Vec<usize>>(), 0..=6)) {
        let mut odd: BTreeSet<usize> = odd.into_iter().collect();
        if odd.len() % 2 == 1 {
            let first = *odd.iter().next().unwrap();
            odd.remove(&first);
        }
        round_trip(&prism(), Family::OJoin(odd), &p);
    }

    #[test]
    fn rainbow_vtrees_of_octahedron(p in picks(), v in 0usize..6) {
        let g = octahedron();
        // the edges at the vertex opposite v, away from v, form one part
        let opposite = v ^ 1;
        let part: Vec<usize> = (0..g.m()).filter(|&e| { let (a, b) = g.edge(e); a == opposite || b == opposite }).collect();
        round_trip(&g, Family::RainbowVTree(RainbowSpec { v, parts: vec![part] }), &p);
    }

    #[test]
    fn two_factors_of_prism(mut p in picks()) {
        // every member once keeps the support cubic
        let k = enumerate_family(&prism(), &Family::TwoFactor).unwrap().len();
        p.extend((0..k).map(|i| (i, 1)));
        round_trip(&prism(), Family::TwoFactor, &p);
    }
}
