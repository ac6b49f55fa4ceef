use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bestround::approxarray::build_array_with;
use bestround::contfrac::oracle_first_kind_with;
use bestround::{Execution, NamedConstant, RealConstant};

fn bench_build_array(c: &mut Criterion) {
    let beta = RealConstant::named(NamedConstant::Beta, 60).unwrap();
    let mut group = c.benchmark_group("build_array");
    for n in [2_000u64, 20_000] {
        for exec in [Execution::Sequential, Execution::Parallel] {
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), n), &n, |b, &n| {
                b.iter(|| build_array_with(&beta, n, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let pi = RealConstant::named(NamedConstant::Pi, 60).unwrap();
    let mut group = c.benchmark_group("oracle_first_kind");
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(format!("{exec:?}/2000"), |b| {
            b.iter(|| oracle_first_kind_with(&pi, 2_000, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_build_array, bench_oracle);
criterion_main!(benches);
