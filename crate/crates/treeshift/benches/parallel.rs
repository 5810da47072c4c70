//! Parallel vs sequential batch evaluation over independent instances.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use treeshift::batch::{sample_instances, verdict_trio_many, verdict_trio_many_sequential};

fn bench_batches(c: &mut Criterion) {
    let mut group = c.benchmark_group("crosscheck_batch");
    for count in [128usize, 512] {
        let instances = sample_instances(4, count, 41);
        group.bench_with_input(
            BenchmarkId::new("parallel", count),
            &instances,
            |b, instances| b.iter(|| verdict_trio_many(black_box(instances))),
        );
        group.bench_with_input(
            BenchmarkId::new("sequential", count),
            &instances,
            |b, instances| b.iter(|| verdict_trio_many_sequential(black_box(instances))),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_batches);
criterion_main!(benches);
