use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pmu_sched::bnb::SolveOptions;
use pmu_sched::harness::{solve_batch, solve_batch_sequential};
use pmu_sched::sched::{random_instance, Instance};

fn batch(n: usize, density: f64, count: u64) -> Vec<Instance> {
    (0..count)
        .map(|s| random_instance(s, n, density, 10))
        .collect()
}

fn compare(c: &mut Criterion) {
    let options = SolveOptions::default();
    let mut group = c.benchmark_group("solve_batch");
    group.sample_size(10);
    for (n, density) in [(12, 0.3), (24, 0.2), (36, 0.1)] {
        let insts = batch(n, density, 32);
        let label = format!("n{n}_d{density}");
        group.bench_with_input(BenchmarkId::new("parallel", &label), &insts, |b, insts| {
            b.iter(|| solve_batch(insts, &options))
        });
        group.bench_with_input(
            BenchmarkId::new("sequential", &label),
            &insts,
            |b, insts| b.iter(|| solve_batch_sequential(insts, &options)),
        );
    }
    group.finish();
}

criterion_group!(benches, compare);
criterion_main!(benches);
