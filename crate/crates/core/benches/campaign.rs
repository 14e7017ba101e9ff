use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stallings::verify::{fuzz, fuzz_sequential, FuzzConfig};

fn campaign(c: &mut Criterion) {
    let mut group = c.benchmark_group("campaign");
    group.sample_size(10);
    for (name, config) in [
        (
            "rank2",
            FuzzConfig { seed: 1, count: 500, min_gens: 2, max_gens: 2, exact_rank: Some(2), ..FuzzConfig::default() },
        ),
        ("shared", FuzzConfig { seed: 1, count: 200, shared: 2, ..FuzzConfig::default() }),
    ] {
        group.bench_with_input(BenchmarkId::new("sequential", name), &config, |b, cfg| b.iter(|| fuzz_sequential(cfg)));
        group.bench_with_input(BenchmarkId::new("parallel", name), &config, |b, cfg| b.iter(|| fuzz(cfg)));
    }
    group.finish();
}

criterion_group!(benches, campaign);
criterion_main!(benches);
