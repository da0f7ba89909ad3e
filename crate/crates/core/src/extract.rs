//! Scene-graph extraction from a segmented floor-plan annotation: filter and
//! re-categorize assets, classify doorways as inter-room or external, build
//! the room connectivity from inter-room doorways and attach each remaining
//! asset to the room containing its centroid.
//!
//! The annotation is JSON:
//!
//! ```json
//! {
//!   "context": "residential",
//!   "difficulty": 2,
//!   "rooms": [{"id": "r1", "category": "kitchen", "polygon": [[0,0],[4,0],[4,3],[0,3]]}],
//!   "assets": [{"category": "chair", "box": {"min": [1,1], "max": [1.5,1.5]}, "color": "red"}],
//!   "doorways": [{"segment": [[0,1],[0,1.9]], "width": 0.9}]
//! }
//! ```
//!
//! `context` defaults to generic and `difficulty` to an estimate from the
//! room count. Polygons are in meters, vertices in either orientation.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

use crate::config::Calibration;
use crate::geom::{
    boundary_distance, centroid, edges, point_in_polygon, segments_cross_properly, signed_area, Point, Rect, Segment,
};
use crate::graph::{AssetSpec, Edge, RoomNode, SceneGraph, ValidationError, WorldContext};
use crate::prompt::estimate_from_rooms;

/// Doorway-to-wall tolerance in meters.
pub const DOOR_EPS: f64 = 0.05;

const DEFAULT_MAP: &str = include_str!("../data/category_map.json");
const DEFAULT_COLOR: &str = "grey";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoomPolygon {
    pub id: String,
    pub category: String,
    pub polygon: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssetBox {
    pub category: String,
    #[serde(rename = "box")]
    pub bbox: Rect,
    #[serde(default)]
    pub color: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoorSegment {
    pub segment: Segment,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentationAnnotation {
    #[serde(default)]
    pub context: Option<WorldContext>,
    #[serde(default)]
    pub difficulty: Option<u32>,
    pub rooms: Vec<RoomPolygon>,
    #[serde(default)]
    pub assets: Vec<AssetBox>,
    #[serde(default)]
    pub doorways: Vec<DoorSegment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryTarget {
    pub description: String,
    pub height: f64,
    #[serde(default)]
    pub color: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategoryRule {
    Drop(DropToken),
    Map(CategoryTarget),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DropToken {
    #[serde(rename = "DROP")]
    Drop,
}

/// Raw asset token to target template or DROP.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CategoryMap(pub BTreeMap<String, CategoryRule>);

impl CategoryMap {
    pub fn from_json(bytes: &[u8]) -> Result<Self, ExtractError> {
        serde_json::from_slice(bytes).map_err(|e| ExtractError::Schema(format!("category map: {e}")))
    }

    pub fn default_map() -> Self {
        Self::from_json(DEFAULT_MAP.as_bytes()).expect("bundled category map parses")
    }

    pub fn get(&self, token: &str) -> Option<&CategoryRule> {
        self.0.get(token)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DoorClass {
    InterRoom { a: String, b: String },
    External { room: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedDoorway {
    pub segment: Segment,
    #[serde(flatten)]
    pub class: DoorClass,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtractError {
    #[error("schema: {0}")]
    Schema(String),
    #[error("invalid annotation: {0}")]
    InvalidAnnotation(String),
    #[error("doorway {index} is ambiguous: near rooms {rooms:?}")]
    AmbiguousDoorway { index: usize, rooms: Vec<String> },
    #[error("asset {index} ({category}) has its centroid in no room: {bbox:?}")]
    OrphanAsset { index: usize, category: String, bbox: Rect },
    #[error("asset category {0:?} is not in the category map")]
    UnknownCategory(String),
    #[error(transparent)]
    Graph(#[from] ValidationError),
}

pub fn parse_annotation(bytes: &[u8]) -> Result<SegmentationAnnotation, ExtractError> {
    serde_json::from_slice(bytes).map_err(|e| ExtractError::Schema(e.to_string()))
}

fn is_simple(poly: &[Point]) -> bool {
    let es: Vec<Segment> = edges(poly).collect();
    let n = es.len();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if !adjacent && crate::geom::segments_intersect(&es[i], &es[j]) {
                return false;
            }
        }
    }
    true
}

fn strictly_inside(poly: &[Point], p: Point) -> bool {
    point_in_polygon(poly, p) && boundary_distance(poly, p) > 1e-9
}

/// Probe points of a polygon: vertices, edge midpoints, points just inside
/// each edge midpoint and the centroid.
fn probes(poly: &[Point]) -> Vec<Point> {
    let ccw = signed_area(poly) > 0.0;
    let mut out: Vec<Point> = poly.to_vec();
    for e in edges(poly) {
        let d = e.b - e.a;
        let inward = if ccw { Point::new(-d.y, d.x) } else { Point::new(d.y, -d.x) } * (1e-4 / e.length());
        out.push(e.midpoint());
        out.push(e.midpoint() + inward);
    }
    out.push(centroid(poly));
    out
}

fn interiors_overlap(a: &[Point], b: &[Point]) -> bool {
    let ea: Vec<Segment> = edges(a).collect();
    let eb: Vec<Segment> = edges(b).collect();
    if ea.iter().any(|s| eb.iter().any(|t| segments_cross_properly(s, t))) {
        return true;
    }
    probes(a).iter().any(|p| strictly_inside(b, *p) && (point_in_polygon(a, *p) || boundary_distance(a, *p) < 1e-9))
        || probes(b)
            .iter()
            .any(|p| strictly_inside(a, *p) && (point_in_polygon(b, *p) || boundary_distance(b, *p) < 1e-9))
}

/// Checks the annotation invariants: unique ids, simple non-degenerate
/// polygons, pairwise disjoint interiors, positive door widths.
pub fn validate_annotation(seg: &SegmentationAnnotation) -> Result<(), ExtractError> {
    let bad = |m: String| Err(ExtractError::InvalidAnnotation(m));
    let mut ids = BTreeSet::new();
    for r in &seg.rooms {
        if !ids.insert(r.id.as_str()) {
            return bad(format!("duplicate room id {:?}", r.id));
        }
        if r.polygon.len() < 3 || signed_area(&r.polygon).abs() < 1e-9 {
            return bad(format!("room {:?} has a degenerate polygon", r.id));
        }
        if !is_simple(&r.polygon) {
            return bad(format!("room {:?} polygon self-intersects", r.id));
        }
    }
    for (i, a) in seg.rooms.iter().enumerate() {
        for b in &seg.rooms[i + 1..] {
            if interiors_overlap(&a.polygon, &b.polygon) {
                return bad(format!("rooms {:?} and {:?} overlap", a.id, b.id));
            }
        }
    }
    if let Some((i, _)) = seg.doorways.iter().enumerate().find(|(_, d)| !(d.width > 0.0)) {
        return bad(format!("doorway {i} has non-positive width"));
    }
    Ok(())
}

fn near_boundary(poly: &[Point], s: &Segment) -> bool {
    [s.a, s.midpoint(), s.b].iter().all(|p| boundary_distance(poly, *p) <= DOOR_EPS)
}

/// Labels each doorway by the rooms whose boundary lies within
/// [`DOOR_EPS`] of it: two rooms make it inter-room, one makes it external.
pub fn classify_doorways(seg: &SegmentationAnnotation) -> Result<Vec<ClassifiedDoorway>, ExtractError> {
    seg.doorways
        .iter()
        .enumerate()
        .map(|(index, d)| {
            let mut near: Vec<&str> =
                seg.rooms.iter().filter(|r| near_boundary(&r.polygon, &d.segment)).map(|r| r.id.as_str()).collect();
            near.sort_unstable();
            let class = match near.as_slice() {
                [r] => DoorClass::External { room: r.to_string() },
                [a, b] => DoorClass::InterRoom { a: a.to_string(), b: b.to_string() },
                _ => {
                    return Err(ExtractError::AmbiguousDoorway {
                        index,
                        rooms: near.iter().map(|s| s.to_string()).collect(),
                    })
                }
            };
            Ok(ClassifiedDoorway { segment: d.segment, class })
        })
        .collect()
}

/// Builds the scene graph described by an annotation.
pub fn extract_scene_graph(seg: &SegmentationAnnotation, map: &CategoryMap) -> Result<SceneGraph, ExtractError> {
    validate_annotation(seg)?;
    let doors = classify_doorways(seg)?;
    let mut edges = BTreeSet::new();
    let mut external = Vec::new();
    for d in doors {
        match d.class {
            DoorClass::InterRoom { a, b } => {
                edges.insert(Edge::new(a, b));
            }
            DoorClass::External { room } => external.push(room),
        }
    }

    let mut per_room: BTreeMap<&str, Vec<(&AssetBox, AssetSpec)>> = BTreeMap::new();
    for (index, a) in seg.assets.iter().enumerate() {
        let target = match map.get(&a.category) {
            None => return Err(ExtractError::UnknownCategory(a.category.clone())),
            Some(CategoryRule::Drop(_)) => continue,
            Some(CategoryRule::Map(t)) => t,
        };
        let c = a.bbox.center();
        let room = seg
            .rooms
            .iter()
            .filter(|r| point_in_polygon(&r.polygon, c) || boundary_distance(&r.polygon, c) < 1e-9)
            .min_by(|x, y| x.id.cmp(&y.id))
            .ok_or_else(|| ExtractError::OrphanAsset { index, category: a.category.clone(), bbox: a.bbox })?;
        let color = a.color.clone().or_else(|| target.color.clone()).unwrap_or_else(|| DEFAULT_COLOR.to_string());
        let spec = AssetSpec::new(target.description.clone(), [a.bbox.width(), a.bbox.height(), target.height], color);
        per_room.entry(room.id.as_str()).or_default().push((a, spec));
    }

    let rooms = seg
        .rooms
        .iter()
        .map(|r| {
            let mut assets = per_room.remove(r.id.as_str()).unwrap_or_default();
            // input order must not matter
            assets.sort_by(|(x, _), (y, _)| {
                let k = |b: &AssetBox| [b.bbox.min.y, b.bbox.min.x, b.bbox.max.y, b.bbox.max.x];
                k(x).iter()
                    .zip(k(y).iter())
                    .map(|(p, q)| p.total_cmp(q))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then_with(|| x.category.cmp(&y.category))
                    .then_with(|| x.color.cmp(&y.color))
            });
            RoomNode::new(r.id.clone(), r.category.clone(), assets.into_iter().map(|(_, s)| s).collect())
        })
        .collect();
    let difficulty = seg.difficulty.unwrap_or_else(|| estimate_from_rooms(&Calibration::default(), seg.rooms.len()));
    Ok(SceneGraph::new(seg.context.unwrap_or(WorldContext::Generic), difficulty, rooms, edges, external)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::serialize_scene_graph;

    fn sq(id: &str, x: f64, y: f64, s: f64) -> RoomPolygon {
        RoomPolygon { id: id.into(), category: "room".into(), polygon: Rect::from_xywh(x, y, s, s).corners() }
    }

    fn door(ax: f64, ay: f64, bx: f64, by: f64) -> DoorSegment {
        DoorSegment { segment: Segment::new(Point::new(ax, ay), Point::new(bx, by)), width: 0.4 }
    }

    fn two_rooms() -> SegmentationAnnotation {
        SegmentationAnnotation {
            context: None,
            difficulty: None,
            rooms: vec![sq("r1", 0.0, 0.0, 1.0), sq("r2", 1.0, 0.0, 1.0)],
            assets: vec![
                AssetBox {
                    category: "chair".into(),
                    bbox: Rect::from_xywh(0.2, 0.2, 0.4, 0.4),
                    color: Some("red".into()),
                },
                AssetBox { category: "window".into(), bbox: Rect::from_xywh(1.2, 0.2, 0.4, 0.1), color: None },
            ],
            doorways: vec![door(1.0, 0.3, 1.0, 0.7), door(0.0, 0.3, 0.0, 0.7)],
        }
    }

    #[test]
    fn classification() {
        let c = classify_doorways(&two_rooms()).unwrap();
        assert_eq!(c[0].class, DoorClass::InterRoom { a: "r1".into(), b: "r2".into() });
        assert_eq!(c[1].class, DoorClass::External { room: "r1".into() });
        let mut s = two_rooms();
        s.doorways.push(door(3.0, 3.0, 3.0, 3.5));
        assert!(matches!(classify_doorways(&s), Err(ExtractError::AmbiguousDoorway { index: 2, .. })));
    }

    #[test]
    fn extraction_filters_and_assigns() {
        let g = extract_scene_graph(&two_rooms(), &CategoryMap::default_map()).unwrap();
        assert_eq!(g.rooms().len(), 2);
        assert_eq!(g.edges().iter().cloned().collect::<Vec<_>>(), vec![Edge::new("r1", "r2")]);
        assert_eq!(g.room("r1").unwrap().assets.len(), 1);
        assert_eq!(g.room("r1").unwrap().assets[0].description, "chair");
        assert!(g.room("r2").unwrap().assets.is_empty());
    }

    #[test]
    fn unknown_and_orphan_assets() {
        let mut s = two_rooms();
        s.assets[0].category = "spaceship".into();
        assert_eq!(
            extract_scene_graph(&s, &CategoryMap::default_map()),
            Err(ExtractError::UnknownCategory("spaceship".into()))
        );
        let mut s = two_rooms();
        s.assets[0].bbox = Rect::from_xywh(5.0, 5.0, 0.5, 0.5);
        assert!(matches!(
            extract_scene_graph(&s, &CategoryMap::default_map()),
            Err(ExtractError::OrphanAsset { index: 0, .. })
        ));
    }

    #[test]
    fn overlapping_rooms_rejected() {
        let mut s = two_rooms();
        s.rooms[1] = sq("r2", 0.5, 0.0, 1.0);
        assert!(matches!(validate_annotation(&s), Err(ExtractError::InvalidAnnotation(_))));
        s.rooms[1] = sq("r2", 0.0, 0.0, 1.0);
        assert!(validate_annotation(&s).is_err());
    }

    #[test]
    fn input_order_does_not_matter() {
        let a = two_rooms();
        let mut b = two_rooms();
        b.rooms.reverse();
        b.assets.reverse();
        b.doorways.reverse();
        let m = CategoryMap::default_map();
        assert_eq!(
            serialize_scene_graph(&extract_scene_graph(&a, &m).unwrap()),
            serialize_scene_graph(&extract_scene_graph(&b, &m).unwrap())
        );
    }

    #[test]
    fn default_map_size() {
        let m = CategoryMap::default_map();
        assert!(m.0.len() >= 40);
        assert!(matches!(m.get("window"), Some(CategoryRule::Drop(_))));
    }
}
