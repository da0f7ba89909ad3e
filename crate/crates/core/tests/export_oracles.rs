use std::collections::BTreeMap;
use std::sync::Arc;

use scenegen_core::export::{
    count_kind_elements, export_occupancy_grid, export_svg, read_world_bundle, BundleIoError, CHROME_ELEMENTS, FREE,
    OCCUPIED, UNKNOWN,
};
use scenegen_core::layout::{DoorKind, Doorway, FloorPlan, LayoutReport, RoomShape};
use scenegen_core::modeldb::defaults::default_bundle;
use scenegen_core::pipeline::{generate_worlds, Engine, GenerateInput, GenerateRequest};
use scenegen_core::{GenConfig, Placement, Point, Rect, Segment, WorldBundle, WorldContext};

fn square_room(wall: f64) -> FloorPlan {
    let r = Rect::from_xywh(0.0, 0.0, 4.0, 4.0);
    FloorPlan {
        resolution: 0.05,
        wall_thickness: wall,
        context: WorldContext::Office,
        difficulty: 1,
        bounds: r,
        rooms: vec![RoomShape { id: "r0".into(), category: "office".into(), polygon: r.corners(), assets: vec![] }],
        doorways: vec![Doorway {
            segment: Segment::new(Point::new(0.0, 1.0), Point::new(0.0, 1.9)),
            width: 0.9,
            kind: DoorKind::External,
            rooms: vec!["r0".into()],
        }],
        zones: vec![],
        report: LayoutReport::default(),
    }
}

fn counts(data: &[u8]) -> BTreeMap<u8, usize> {
    let mut m = BTreeMap::new();
    for v in data {
        *m.entry(*v).or_insert(0) += 1;
    }
    m
}

/// 4 x 4 m room, 0.2 m walls, 0.05 m cells, 1 m margin: a 120 x 120 raster.
/// Cell centers lie at odd multiples of 0.025, so the wall band is four cells
/// thick and the interior 76 x 76. The band misses one diagonal cell at each
/// outer corner (distance sqrt(2) * 0.075 > 0.1), and the 0.9 m doorway frees
/// 18 cells along the wall times four across.
#[test]
fn empty_room_pixel_counts() {
    let g = export_occupancy_grid(&square_room(0.2), &[]);
    assert_eq!((g.width, g.height), (120, 120));
    let band = 84 * 84 - 76 * 76 - 4;
    let door = 18 * 4;
    let c = counts(&g.data);
    assert_eq!(c[&OCCUPIED], band - door);
    assert_eq!(c[&FREE], 76 * 76 + door);
    assert_eq!(c[&UNKNOWN], 120 * 120 - band - 76 * 76);

    // the doorway gap is free across the whole wall band
    let col = |x: f64| ((x + 1.0) / 0.05).floor() as usize;
    let row = |y: f64| ((y + 1.0) / 0.05).floor() as usize;
    for x in [-0.075, -0.025, 0.025, 0.075] {
        assert_eq!(g.get(col(x), row(1.45)), FREE);
        assert_eq!(g.get(col(x), row(0.5)), OCCUPIED);
    }
}

#[test]
fn placed_box_adds_its_area() {
    let fp = square_room(0.2);
    let before = counts(&export_occupancy_grid(&fp, &[]).data)[&OCCUPIED];
    let hull = Rect::from_xywh(1.5, 1.5, 1.0, 1.0).corners();
    let p = Placement {
        model_id: "box".into(),
        position: Point::new(2.0, 2.0),
        rotation: 0,
        world_hull: hull,
        zone_ref: "r0/z0".into(),
        room_id: "r0".into(),
        asset_index: 0,
        substitute: false,
    };
    let after = counts(&export_occupancy_grid(&fp, std::slice::from_ref(&p)).data)[&OCCUPIED];
    let exact = (1.0f64 / 0.05).powi(2) as usize;
    let band = 4 * 21;
    assert!(after - before >= exact && after - before <= exact + band, "{}", after - before);

    // off-grid box: the conservative raster covers at most one extra ring
    let shifted = Placement { world_hull: Rect::from_xywh(1.51, 1.52, 1.0, 1.0).corners(), ..p };
    let after = counts(&export_occupancy_grid(&fp, &[shifted]).data)[&OCCUPIED];
    assert!(after - before >= exact && after - before <= exact + band, "{}", after - before);
}

#[test]
fn degenerate_plan_is_one_unknown_cell() {
    let mut fp = square_room(0.2);
    fp.rooms.clear();
    fp.bounds = Rect::new(Point::new(0.0, 0.0), Point::new(0.0, 0.0));
    let g = export_occupancy_grid(&fp, &[]);
    assert_eq!((g.width, g.height, g.data.clone()), (1, 1, vec![UNKNOWN]));
}

fn worlds(prompt: &str, seed: u64) -> Vec<WorldBundle> {
    let engine = Engine::new(GenConfig::default(), Arc::new(default_bundle()));
    let req = GenerateRequest { input: GenerateInput::Prompt(prompt.into()), seed: Some(seed) };
    generate_worlds(&engine, &req).unwrap().into_iter().map(|r| r.unwrap().bundle).collect()
}

#[test]
fn svg_element_count_rule() {
    for w in worlds("generate me 4 difficulty levels of a hospital environment", 3) {
        let svg = export_svg(&w.floorplan, &w.placements, &w.scenario, &w.title());
        let want = w.floorplan.rooms.len()
            + w.floorplan.doorways.len()
            + w.placements.len()
            + w.scenario.agents.len()
            + CHROME_ELEMENTS;
        assert_eq!(count_kind_elements(&svg), want);
        assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    }
}

#[test]
fn corrupt_placements_are_named() {
    let w = worlds("generate me 2 difficulty levels of an office environment", 8).remove(1);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("w");
    w.write_dir(&p).unwrap();
    assert_eq!(read_world_bundle(&p).unwrap(), w);

    std::fs::write(p.join("placements.json"), b"{\"not\": \"a list\"}").unwrap();
    match read_world_bundle(&p) {
        Err(BundleIoError::CorruptBundle { file, .. }) => assert_eq!(file, "placements.json"),
        other => panic!("unexpected {other:?}"),
    }

    let archive = dir.path().join("w.zip");
    std::fs::write(&archive, w.to_archive().unwrap()).unwrap();
    assert_eq!(read_world_bundle(&archive).unwrap(), w);
    assert_eq!(WorldBundle::from_archive(&w.to_archive().unwrap()).unwrap().id, w.id);
}
