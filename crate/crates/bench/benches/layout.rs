use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scenegen_core::prompt::difficulty_targets;
use scenegen_core::{synthesize_floorplan, synthesize_graph, GenConfig, WorldContext};

fn layout(c: &mut Criterion) {
    let cfg = GenConfig::default();
    let mut group = c.benchmark_group("synthesize_floorplan");
    for level in [1u32, 4, 8] {
        let targets = difficulty_targets(&cfg.calibration, WorldContext::Office, level).unwrap();
        let g = synthesize_graph(&targets, WorldContext::Office, level, &mut ChaCha8Rng::seed_from_u64(level as u64));
        group.bench_with_input(BenchmarkId::from_parameter(level), &g, |b, g| {
            let mut seed = 0u64;
            b.iter(|| {
                seed += 1;
                synthesize_floorplan(g, &cfg.layout, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
            })
        });
    }
    group.finish();

    let mut group = c.benchmark_group("synthesize_graph");
    for level in [1u32, 8] {
        let targets = difficulty_targets(&cfg.calibration, WorldContext::Hospital, level).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(level), &targets, |b, t| {
            let mut seed = 0u64;
            b.iter(|| {
                seed += 1;
                synthesize_graph(t, WorldContext::Hospital, level, &mut ChaCha8Rng::seed_from_u64(seed))
            })
        });
    }
    group.finish();
}

criterion_group!(benches, layout);
criterion_main!(benches);
