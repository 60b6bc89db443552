use criterion::{criterion_group, criterion_main, Criterion};
use stablepi1::scenarios::{verify_bundled, Execution, RunOptions};

fn catalogue(c: &mut Criterion) {
    let opts = RunOptions::default();
    let mut group = c.benchmark_group("verify_bundled");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| verify_bundled(Execution::Parallel, &opts)));
    group.bench_function("sequential", |b| b.iter(|| verify_bundled(Execution::Sequential, &opts)));
    group.finish();
}

criterion_group!(benches, catalogue);
criterion_main!(benches);
