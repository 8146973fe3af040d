use proptest::prelude::*;
use tourglue::blossom::{max_weight_matching, max_weight_perfect_matching};
use tourglue::rational::{int, zero, Rational};

fn brute(n: usize, edges: &[(usize, usize, Rational)], maxcard: bool) -> (usize, Rational) {
    let mut best = (0usize, zero());
    for mask in 0u32..(1 << edges.len()) {
        let mut used = vec![false; n];
        let mut ok = true;
        let (mut w, mut c) = (zero(), 0);
        for (k, (u, v, x)) in edges.iter().enumerate() {
            if mask >> k & 1 == 1 {
                if used[*u] || used[*v] {
                    ok = false;
                    break;
                }
                used[*u] = true;
                used[*v] = true;
                w += x;
                c += 1;
            }
        }
        if ok {
            let better = if maxcard { (c, w.clone()) > best } else { w > best.1 };
            if better {
                best = (c, w);
            }
        }
    }
    best
}

fn graphs() -> impl Strategy<Value = (usize, Vec<(usize, usize, Rational)>)> {
    (2usize..9).prop_flat_map(|n| {
        let edge = (0..n, 0..n, -5i64..30).prop_filter("loop", |(u, v, _)| u != v);
        (Just(n), prop::collection::vec(edge, 1..14))
            .prop_map(|(n, es)| (n, es.into_iter().map(|(u, v, w)| (u, v, int(w))).collect()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matching_is_optimal((n, edges) in graphs(), maxcard in any::<bool>()) {
        let mate = max_weight_matching(n, &edges, maxcard);
        let mut w = zero();
        let mut count = 0;
        for u in 0..n {
            if let Some(v) = mate[u] {
                prop_assert_eq!(mate[v], Some(u));
                if u < v {
                    count += 1;
                    w += edges
                        .iter()
                        .filter(|(a, b, _)| (*a == u && *b == v) || (*a == v && *b == u))
                        .map(|e| e.2.clone())
                        .max()
                        .unwrap();
                }
            }
        }
        let (c, bw) = brute(n, &edges, maxcard);
        prop_assert_eq!(w, bw);
        if maxcard {
            prop_assert_eq!(count, c);
        }
    }

    #[test]
    fn perfect_matching_when_one_exists((n, edges) in graphs()) {
        let (c, _) = brute(n, &edges, true);
        let got = max_weight_perfect_matching(n, &edges);
        prop_assert_eq!(got.is_some(), 2 * c == n);
    }
}
