use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use synconn::calculus::ConnectiveSpec;
use synconn::exec::{ordered_map, sequential_map, PARALLEL};
use synconn::generator::{mutate, random_connective, spec_seeds, GenBounds, MutationKind};
use synconn::report::{analyze, AnalyzeOptions};

fn batch(count: usize) -> Vec<ConnectiveSpec> {
    let mut specs = Vec::new();
    for seed in spec_seeds(11, count) {
        let base = random_connective(seed, GenBounds::default());
        specs.extend(MutationKind::ALL.iter().filter_map(|&k| mutate(&base, k, seed).ok()));
        specs.push(base);
    }
    specs
}

fn consistent(spec: &ConnectiveSpec) -> bool {
    analyze(spec, AnalyzeOptions::default()).map(|r| r.equivalence_consistent).unwrap_or(false)
}

fn equivalence(c: &mut Criterion) {
    let mut group = c.benchmark_group("equivalence");
    group.sample_size(10);
    for count in [25, 100] {
        let specs = batch(count);
        group.bench_with_input(BenchmarkId::new("sequential", specs.len()), &specs, |b, s| {
            b.iter(|| sequential_map(black_box(s), consistent))
        });
        let label = if PARALLEL { "parallel" } else { "parallel-disabled" };
        group.bench_with_input(BenchmarkId::new(label, specs.len()), &specs, |b, s| {
            b.iter(|| ordered_map(black_box(s), consistent))
        });
    }
    group.finish();
}

criterion_group!(benches, equivalence);
criterion_main!(benches);
