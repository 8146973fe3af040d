use criterion::{criterion_group, criterion_main, Criterion};
use tourglue::generators::{k4_graph, octahedron};
use tourglue::gluer::solve_cyclic;
use tourglue::uniform::{christofides, solve_uniform23, solve_uniform24_base};
use tourglue_bench::cyclic_suite;

fn cyclic(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_cyclic");
    group.sample_size(10);
    for (name, p) in cyclic_suite() {
        group.bench_function(name, |b| b.iter(|| solve_cyclic(&p).unwrap()));
    }
    group.finish();
}

fn baseline(c: &mut Criterion) {
    let mut group = c.benchmark_group("christofides");
    group.sample_size(10);
    for (name, p) in cyclic_suite() {
        group.bench_function(name, |b| b.iter(|| christofides(&p.graph, &p.x).unwrap()));
    }
    group.finish();
}

fn uniform(c: &mut Criterion) {
    let mut group = c.benchmark_group("uniform");
    group.sample_size(10);
    let k4 = k4_graph();
    group.bench_function("uniform23-k4", |b| b.iter(|| solve_uniform23(&k4, None).unwrap()));
    let oct = octahedron();
    group.bench_function("uniform24-octahedron", |b| b.iter(|| solve_uniform24_base(&oct).unwrap()));
    group.finish();
}

criterion_group!(benches, cyclic, baseline, uniform);
criterion_main!(benches);
