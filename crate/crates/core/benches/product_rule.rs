use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hilfer_bvp::cli::{parse_problem, EXAMPLE_PROBLEM};
use hilfer_bvp::expr::parse;
use hilfer_bvp::fraccalc::{GradedMesh, Interp, ProductRule};
use hilfer_bvp::solver::{solve_picard, SolveConfig};
use hilfer_bvp::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn build(c: &mut Criterion) {
    let mut group = c.benchmark_group("rule_build");
    group.sample_size(10);
    for n in [256, 1024] {
        let mesh = GradedMesh::build(0.0, 1.0, n, 4.0, &[]).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &mesh, |b, mesh| {
                b.iter(|| ProductRule::new(mesh, 1.0 / 3.0, Interp::Weighted { gamma: 0.5 }, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn apply(c: &mut Criterion) {
    let mut group = c.benchmark_group("rule_apply");
    for n in [256, 1024] {
        let mesh = Arc::new(GradedMesh::build(0.0, 1.0, n, 4.0, &[]).unwrap());
        let rule = ProductRule::new(&mesh, 1.0 / 3.0, Interp::Plain, Execution::Parallel).unwrap();
        let x: Vec<f64> = mesh.nodes().iter().map(|t| t.sin()).collect();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &x, |b, x| b.iter(|| rule.apply(x, exec)));
        }
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let mut spec = parse_problem(EXAMPLE_PROBLEM).unwrap().spec;
    spec.f = parse("t/16*(1+sin(abs(z)))").unwrap();
    let mut group = c.benchmark_group("solve_picard");
    group.sample_size(10);
    for (name, exec) in MODES {
        let config = SolveConfig {
            n_base: 512,
            exec,
            ..SolveConfig::default()
        };
        group.bench_function(name, |b| b.iter(|| solve_picard(&spec, &config).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, build, apply, solve);
criterion_main!(benches);
