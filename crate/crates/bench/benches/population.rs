use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scenegen_core::layout::realized_graph;
use scenegen_core::modeldb::defaults::default_bundle;
use scenegen_core::populate::hulls_intersect;
use scenegen_core::prompt::difficulty_targets;
use scenegen_core::{
    generate_scenario, place_assets, synthesize_floorplan, synthesize_graph, GenConfig, Point, WorldContext,
};

fn population(c: &mut Criterion) {
    let cfg = GenConfig::default();
    let db = default_bundle();
    let mut group = c.benchmark_group("place_assets");
    for level in [2u32, 5, 8] {
        let targets = difficulty_targets(&cfg.calibration, WorldContext::Residential, level).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(level as u64);
        let g = synthesize_graph(&targets, WorldContext::Residential, level, &mut rng);
        let fp = synthesize_floorplan(&g, &cfg.layout, &mut rng).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(level), &fp, |b, fp| {
            b.iter(|| place_assets(fp, &db, &mut ChaCha8Rng::seed_from_u64(9)))
        });
    }
    group.finish();

    let targets = difficulty_targets(&cfg.calibration, WorldContext::Hospital, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let g = synthesize_graph(&targets, WorldContext::Hospital, 6, &mut rng);
    let fp = synthesize_floorplan(&g, &cfg.layout, &mut rng).unwrap();
    let realized = realized_graph(&fp).unwrap();
    let (placements, _) = place_assets(&fp, &db, &mut rng);
    c.bench_function("generate_scenario/6", |b| {
        b.iter(|| {
            generate_scenario(
                &fp,
                &realized,
                &placements,
                targets.pedestrians,
                &cfg.scenario,
                Some(&db),
                &mut ChaCha8Rng::seed_from_u64(3),
            )
        })
    });

    let square =
        |x: f64| vec![Point::new(x, 0.0), Point::new(x + 1.0, 0.0), Point::new(x + 1.0, 1.0), Point::new(x, 1.0)];
    let (a, b_touch, b_hit) = (square(0.0), square(1.0), square(0.5));
    c.bench_function("hulls_intersect", |b| b.iter(|| (hulls_intersect(&a, &b_touch), hulls_intersect(&a, &b_hit))));
}

criterion_group!(benches, population);
criterion_main!(benches);
