use num_traits::Zero;
use tourglue::cyclic::{critical_cuts, CyclicPoint};
use tourglue::generators::{k4half, lower_bound, random_cyclic};
use tourglue::gluer::{base_case_tours, solve_cyclic_with, zeta_max};
use tourglue::graph::is_tour;
use tourglue::patterns::{phi2, profile_of};
use tourglue::rational::{rat, Rational};

fn theta_of(seed: u64) -> Rational {
    [rat(1, 2), rat(1, 3), rat(2, 5)][(seed % 3) as usize].clone()
}

fn check_target(p: &CyclicPoint, seed: u64) {
    let sol = solve_cyclic_with(p, &Rational::zero()).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    let y = p.target_y();
    let mut sum = vec![Rational::zero(); p.m()];
    let mut total = Rational::zero();
    for (l, f) in &sol.combination.terms {
        assert!(is_tour(&p.graph, f));
        total += l;
        for e in 0..p.m() {
            sum[e] += l * Rational::from_integer(f.mult[e].into());
        }
    }
    assert_eq!(total, rat(1, 1));
    assert_eq!(sum, y.0);
}

#[test]
fn k4half_base_profile() {
    let p = k4half();
    let b = base_case_tours(&p, 0, &Rational::zero()).unwrap();
    let q = phi2(&b.combination, p.m());
    assert_eq!(q.0[4], rat(9, 20));
    assert_eq!(q.0[0], rat(1, 8));
    assert_eq!(profile_of(&p, &b.combination, 0).unwrap()[0], Rational::zero());
}

#[test]
fn base_case_zeta_sweep() {
    let p = k4half();
    let max = zeta_max(&p.theta);
    for k in 0..=4 {
        let z = &max * rat(k, 4);
        let b = base_case_tours(&p, 0, &z).unwrap_or_else(|e| panic!("zeta {z}: {e}"));
        assert_eq!(profile_of(&p, &b.combination, 0).unwrap()[0], z);
    }
}

#[test]
fn lower_bound_family() {
    for eps in [rat(1, 4), rat(1, 6)] {
        let p = lower_bound(&eps).unwrap();
        check_target(&p, 0);
    }
}

#[test]
fn random_points() {
    let mut with_cuts = 0;
    for seed in 0..40u64 {
        let n = 6 + 2 * (seed as usize % 5);
        let p = random_cyclic(n, &theta_of(seed), seed).unwrap();
        if !critical_cuts(&p).is_empty() {
            with_cuts += 1;
        }
        check_target(&p, seed);
    }
    eprintln!("with critical cuts: {with_cuts}");
}
