//! Independent checks over a finished world. Overlaps are measured with
//! polygon clipping rather than the separating-axis predicate used during
//! generation.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::config::ScenarioConfig;
use crate::export::WorldBundle;
use crate::geom::{boundary_distance, edges, orient, point_in_polygon, signed_area, Point, Rect, Segment};
use crate::graph::compute_graph_metrics;
use crate::layout::{realized_graph, DoorKind, FloorPlan};
use crate::scenario::{is_free, BEHAVIORS};

/// Overlap area below this is contact, not intersection.
pub const AREA_EPS: f64 = 1e-9;
const TOL: f64 = 1e-6;

/// Sutherland–Hodgman clipping of `subject` by the convex CCW polygon `clip`.
pub fn clip_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut out = subject.to_vec();
    for e in edges(clip) {
        if out.is_empty() {
            break;
        }
        let input = std::mem::take(&mut out);
        let inside = |p: Point| orient(e.a, e.b, p) >= 0.0;
        let cut = |p: Point, q: Point| {
            let (dp, dq) = (orient(e.a, e.b, p), orient(e.a, e.b, q));
            let t = dp / (dp - dq);
            p + (q - p) * t
        };
        for i in 0..input.len() {
            let (p, q) = (input[i], input[(i + 1) % input.len()]);
            match (inside(p), inside(q)) {
                (true, true) => out.push(q),
                (true, false) => out.push(cut(p, q)),
                (false, true) => {
                    out.push(cut(p, q));
                    out.push(q);
                }
                (false, false) => {}
            }
        }
    }
    out
}

/// Area of the intersection of two convex CCW polygons.
pub fn intersection_area(a: &[Point], b: &[Point]) -> f64 {
    let c = clip_convex(a, b);
    if c.len() < 3 {
        0.0
    } else {
        signed_area(&c).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    RoomOverlap,
    PlacementOverlap,
    PlacementOutOfZone,
    PlacementWall,
    ZoneOutsideRoom,
    ZoneOverlap,
    DoorwayOffWall,
    RealizedMismatch,
    Disconnected,
    AgentNotFree,
    AgentRole,
    AgentBehavior,
    GoalUnreachable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub check: Check,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, check: Check) -> usize {
        self.violations.iter().filter(|v| v.check == check).count()
    }

    pub fn counts(&self) -> BTreeMap<Check, usize> {
        let mut m = BTreeMap::new();
        for v in &self.violations {
            *m.entry(v.check.clone()).or_insert(0) += 1;
        }
        m
    }

    fn push(&mut self, check: Check, detail: String) {
        self.violations.push(Violation { check, detail });
    }
}

fn on_boundary(poly: &[Point], p: Point) -> bool {
    boundary_distance(poly, p) <= TOL
}

fn segment_on_boundary(poly: &[Point], s: &Segment) -> bool {
    on_boundary(poly, s.a) && on_boundary(poly, s.b) && on_boundary(poly, s.midpoint())
}

fn wall_strips(fp: &FloorPlan) -> Vec<Vec<Point>> {
    let h = fp.wall_thickness / 2.0;
    fp.rooms
        .iter()
        .flat_map(|r| edges(&r.polygon).collect::<Vec<_>>())
        .map(|e| {
            Rect::new(
                Point::new(e.a.x.min(e.b.x) - h, e.a.y.min(e.b.y) - h),
                Point::new(e.a.x.max(e.b.x) + h, e.a.y.max(e.b.y) + h),
            )
            .corners()
        })
        .collect()
}

/// Floor-plan geometry: room overlaps, zones, doorways.
pub fn validate_floorplan(fp: &FloorPlan, report: &mut ValidationReport) {
    for (i, a) in fp.rooms.iter().enumerate() {
        for b in &fp.rooms[i + 1..] {
            let area = intersection_area(&a.polygon, &b.polygon);
            if area > AREA_EPS {
                report.push(Check::RoomOverlap, format!("{} and {} overlap by {area:.6} m²", a.id, b.id));
            }
        }
    }
    for (i, z) in fp.zones.iter().enumerate() {
        match fp.room(&z.room_id) {
            Some(r) => {
                let inside = intersection_area(&z.polygon, &r.polygon);
                if (inside - signed_area(&z.polygon).abs()).abs() > AREA_EPS.max(1e-9 * inside) {
                    report.push(Check::ZoneOutsideRoom, format!("zone {} leaves room {}", z.id, r.id));
                }
            }
            None => report.push(Check::ZoneOutsideRoom, format!("zone {} names unknown room {}", z.id, z.room_id)),
        }
        for w in &fp.zones[i + 1..] {
            if intersection_area(&z.polygon, &w.polygon) > AREA_EPS {
                report.push(Check::ZoneOverlap, format!("zones {} and {} overlap", z.id, w.id));
            }
        }
    }
    for (k, d) in fp.doorways.iter().enumerate() {
        let mut near: Vec<&str> =
            fp.rooms.iter().filter(|r| segment_on_boundary(&r.polygon, &d.segment)).map(|r| r.id.as_str()).collect();
        near.sort_unstable();
        let expected: Vec<&str> = d.rooms.iter().map(String::as_str).collect();
        let ok = match d.kind {
            DoorKind::InterRoom => expected.len() == 2 && near == expected,
            DoorKind::External => expected.len() == 1 && near == expected,
        };
        if !ok || (d.segment.length() - d.width).abs() > TOL {
            report.push(
                Check::DoorwayOffWall,
                format!("doorway {k} ({:?}) for {:?} lies on walls of {:?}", d.kind, d.rooms, near),
            );
        }
    }
}

/// All checks over a finished world.
pub fn validate_world(w: &WorldBundle, scenario_cfg: &ScenarioConfig) -> ValidationReport {
    let mut report = ValidationReport::default();
    let fp = &w.floorplan;
    validate_floorplan(fp, &mut report);

    match realized_graph(fp) {
        Ok(g) if g == w.realized => {}
        Ok(_) => report.push(Check::RealizedMismatch, "realized graph differs from floor-plan doorways".into()),
        Err(e) => report.push(Check::RealizedMismatch, format!("floor plan does not form a graph: {e}")),
    }
    if !compute_graph_metrics(&w.realized).connected {
        report.push(Check::Disconnected, "realized graph is disconnected".into());
    }

    let zones: BTreeMap<&str, &Vec<Point>> = fp.zones.iter().map(|z| (z.id.as_str(), &z.polygon)).collect();
    let walls = wall_strips(fp);
    for (i, p) in w.placements.iter().enumerate() {
        match zones.get(p.zone_ref.as_str()) {
            Some(z) => {
                let vertices_in = p.world_hull.iter().all(|v| point_in_polygon(z, *v) || on_boundary(z, *v));
                let outside = signed_area(&p.world_hull).abs() - intersection_area(&p.world_hull, z);
                if !vertices_in || outside > AREA_EPS {
                    report.push(Check::PlacementOutOfZone, format!("{} leaves zone {}", p.model_id, p.zone_ref));
                }
            }
            None => report.push(Check::PlacementOutOfZone, format!("{} names unknown zone {}", p.model_id, p.zone_ref)),
        }
        if walls.iter().any(|s| intersection_area(&p.world_hull, s) > AREA_EPS) {
            report.push(Check::PlacementWall, format!("{} in zone {} touches a wall", p.model_id, p.zone_ref));
        }
        for q in &w.placements[i + 1..] {
            let area = intersection_area(&p.world_hull, &q.world_hull);
            if area > AREA_EPS {
                report.push(
                    Check::PlacementOverlap,
                    format!(
                        "{} ({}) and {} ({}) overlap by {area:.6} m²",
                        p.model_id, p.zone_ref, q.model_id, q.zone_ref
                    ),
                );
            }
        }
    }

    let roles: Vec<&str> = scenario_cfg
        .roles
        .get(fp.context.as_str())
        .map(|t| t.keys().map(String::as_str).collect())
        .unwrap_or_else(|| vec!["pedestrian"]);
    let mut obstacles: BTreeMap<&str, Vec<Vec<Point>>> = BTreeMap::new();
    for p in &w.placements {
        obstacles.entry(p.room_id.as_str()).or_default().push(p.world_hull.clone());
    }
    let none = Vec::new();
    let clearance = scenario_cfg.clearance - 1e-9;
    let free_in = |room: &str, p: Point| {
        fp.room(room).is_some_and(|r| is_free(&r.polygon, obstacles.get(room).unwrap_or(&none), clearance, p))
    };
    for a in &w.scenario.agents {
        if !roles.contains(&a.role.as_str()) {
            report.push(Check::AgentRole, format!("{} has role {:?}", a.id, a.role));
        }
        if !BEHAVIORS.contains(&a.behavior.as_str()) {
            report.push(Check::AgentBehavior, format!("{} has behavior {:?}", a.id, a.behavior));
        }
        if !free_in(&a.spawn_room, a.spawn()) {
            report.push(Check::AgentNotFree, format!("{} spawns outside free space", a.id));
        }
        if a.goals.len() != a.goal_rooms.len() || a.goals.is_empty() {
            report.push(
                Check::AgentNotFree,
                format!("{} has {} goals for {} rooms", a.id, a.goals.len(), a.goal_rooms.len()),
            );
        }
        let reach = w.realized.reachable_from(&a.spawn_room);
        for (g, room) in a.goals.iter().zip(&a.goal_rooms) {
            if !free_in(room, Point::new(g[0], g[1])) {
                report.push(Check::AgentNotFree, format!("{} goal {g:?} outside free space of {room}", a.id));
            }
            if !reach.contains(room) {
                report.push(Check::GoalUnreachable, format!("{} cannot reach {room} from {}", a.id, a.spawn_room));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x: f64, y: f64, s: f64) -> Vec<Point> {
        Rect::from_xywh(x, y, s, s).corners()
    }

    #[test]
    fn clipping_areas() {
        assert!((intersection_area(&sq(0.0, 0.0, 1.0), &sq(0.5, 0.5, 1.0)) - 0.25).abs() < 1e-12);
        assert!(intersection_area(&sq(0.0, 0.0, 1.0), &sq(1.0, 0.0, 1.0)) < AREA_EPS);
        assert!((intersection_area(&sq(0.0, 0.0, 2.0), &sq(0.5, 0.5, 1.0)) - 1.0).abs() < 1e-12);
        let tri = vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(0.0, 2.0)];
        assert!((intersection_area(&tri, &sq(0.0, 0.0, 1.0)) - 1.0).abs() < 1e-12);
    }
}
