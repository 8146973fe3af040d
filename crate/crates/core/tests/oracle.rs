use tourglue::generators::{k4half, random_cyclic};
use tourglue::gluer::solve_cyclic;
use tourglue::graph::combination_value;
use tourglue::oracle::{oracle, Verdict, ORACLE_LIMIT};
use tourglue::rational::rat;

#[test]
fn confirms_constructed_targets() {
    for seed in 0..6 {
        let p = random_cyclic(6 + 2 * (seed as usize % 2), &rat(1, 3), seed).unwrap();
        let c = solve_cyclic(&p).unwrap();
        assert!(oracle(&p.graph, &combination_value(&c, p.m())).unwrap().is_feasible());
    }
}

#[test]
fn certificate_reproduces_the_vector() {
    let p = k4half();
    let y = p.target_y();
    let Verdict::Feasible { weights, .. } = oracle(&p.graph, &y).unwrap() else { panic!("infeasible") };
    let mut sum = tourglue::EdgeVector::zeros(p.m());
    for (l, f) in &weights {
        sum = sum.add(&tourglue::EdgeVector::from_multigraph(f).scale(l));
    }
    assert_eq!(sum, y);
}

#[test]
fn halved_target_is_infeasible() {
    let p = k4half();
    let y = p.target_y().scale(&rat(1, 2));
    assert!(!oracle(&p.graph, &y).unwrap().is_feasible());
}

#[test]
fn refuses_large_instances() {
    let p = random_cyclic(ORACLE_LIMIT + 2, &rat(1, 2), 1).unwrap();
    assert!(oracle(&p.graph, &p.target_y()).is_err());
}
