use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scenegen_core::layout::{floorplan_to_json, realized_graph, DoorKind};
use scenegen_core::prompt::difficulty_targets;
use scenegen_core::validate::{validate_floorplan, ValidationReport, AREA_EPS};
use scenegen_core::{
    compute_graph_metrics, synthesize_floorplan, synthesize_graph, GenConfig, SceneGraph, WorldContext,
};

fn graph(ctx: WorldContext, level: u32, seed: u64) -> SceneGraph {
    let cfg = GenConfig::default();
    let t = difficulty_targets(&cfg.calibration, ctx, level).unwrap();
    synthesize_graph(&t, ctx, level, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[test]
fn realized_edges_are_requested_and_connected() {
    let cfg = GenConfig::default();
    for seed in 0..500u64 {
        let ctx = WorldContext::ALL[seed as usize % 4];
        let level = 1 + (seed % 8) as u32;
        let g = graph(ctx, level, seed);
        let fp = synthesize_floorplan(&g, &cfg.layout, &mut ChaCha8Rng::seed_from_u64(seed ^ 0x55)).unwrap();
        let r = realized_graph(&fp).unwrap();
        assert!(r.edges().is_subset(g.edges()), "seed {seed}: realized edge not in the request");
        assert!(compute_graph_metrics(&r).connected, "seed {seed}: realized graph disconnected");
        assert_eq!(fp.rooms.len(), g.rooms().len());
        for e in &fp.report.dropped_edges {
            assert!(g.edges().contains(e) && !r.edges().contains(e));
        }
        assert_eq!(r.edges().len() + fp.report.dropped_edges.len(), g.edges().len());
        let external = fp.doorways.iter().filter(|d| d.kind == DoorKind::External).count();
        assert!(external >= 1 || !fp.report.dropped_external.is_empty());
    }
}

#[test]
fn floorplan_is_a_pure_function_of_the_seed() {
    let cfg = GenConfig::default();
    for (k, ctx) in WorldContext::ALL.into_iter().enumerate() {
        let g = graph(ctx, 6, k as u64);
        let a = synthesize_floorplan(&g, &cfg.layout, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = synthesize_floorplan(&g, &cfg.layout, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(floorplan_to_json(&a), floorplan_to_json(&b));
    }
}

#[test]
fn floorplans_pass_the_geometric_validator() {
    let cfg = GenConfig::default();
    for seed in 0..120u64 {
        let ctx = WorldContext::ALL[seed as usize % 4];
        let level = 1 + (seed % 8) as u32;
        let g = graph(ctx, level, 1000 + seed);
        let fp = synthesize_floorplan(&g, &cfg.layout, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut report = ValidationReport::default();
        validate_floorplan(&fp, &mut report);
        assert!(report.ok(), "seed {seed}: {:?}", report.violations);

        // rooms tile the bounding rectangle
        let rooms: f64 = fp.rooms.iter().map(|r| r.rect().width() * r.rect().height()).sum();
        let bounds = fp.bounds.width() * fp.bounds.height();
        assert!((rooms - bounds).abs() < 1e-6 + AREA_EPS, "seed {seed}: {rooms} vs {bounds}");
        for r in &fp.rooms {
            assert!(r.rect().width().min(r.rect().height()) >= cfg.layout.min_room_side - 1e-9);
        }
        for d in &fp.doorways {
            assert!((d.width - cfg.layout.door_width).abs() < 1e-9);
        }
    }
}
