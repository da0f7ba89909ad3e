//! Population: choose a model for every asset zone and fit its footprint
//! into the zone.

pub mod fit;
pub mod sat;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::geom::{transform, Point, Rect};
use crate::graph::AssetSpec;
use crate::layout::FloorPlan;
use crate::modeldb::{query, ModelBundle, ModelRecord, QueryFilter};

pub use fit::{fit_into_zone, Fit, FitResult, FIT_GRID};
pub use sat::hulls_intersect;

/// Headroom on the requested footprint when filtering candidate models.
pub const FOOTPRINT_TOLERANCE: f64 = 1.25;
/// Number of top-ranked candidates the final pick is drawn from.
pub const TOP_K: usize = 3;
pub const GENERIC_BOX_ID: &str = "generic-box";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PopulateError {
    #[error("no model matches {description:?} ({color}) in room category {room:?}")]
    NoMatch { description: String, color: String, room: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub model_id: String,
    pub position: Point,
    /// Degrees counter-clockwise: 0, 90, 180 or 270.
    pub rotation: u16,
    pub world_hull: Vec<Point>,
    pub zone_ref: String,
    pub room_id: String,
    pub asset_index: usize,
    /// The database had no match and a generic box of the asset's size was used.
    #[serde(default)]
    pub substitute: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AssetRef {
    pub room_id: String,
    pub asset_index: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PopulationReport {
    /// Assets served by the generic box substitute.
    pub no_match: Vec<AssetRef>,
    /// Assets left without a placement, including those the layout could not zone.
    pub unfit: Vec<AssetRef>,
    /// Placement pairs from different zones whose hulls overlap. Zero unless a
    /// zone invariant is broken upstream.
    pub cross_zone_collisions: usize,
}

fn known_room(db: &ModelBundle, category: &str) -> bool {
    db.records().iter().any(|r| r.room_affinity.contains_key(category))
}

/// Picks a model for `spec` among the top-ranked database hits, weighted by
/// score. Models must fit within the asset footprint times
/// [`FOOTPRINT_TOLERANCE`] and, when any record knows the room category, have
/// positive affinity for it.
pub fn select_model<'a, R: Rng + ?Sized>(
    db: &'a ModelBundle,
    spec: &AssetSpec,
    room_category: &str,
    rng: &mut R,
) -> Result<&'a ModelRecord, PopulateError> {
    let filter = QueryFilter {
        tags: vec!["obstacle".into()],
        room: known_room(db, room_category).then(|| room_category.to_string()),
        max_footprint: Some([spec.size[0] * FOOTPRINT_TOLERANCE, spec.size[1] * FOOTPRINT_TOLERANCE]),
        ..Default::default()
    };
    let text = format!("{} {}", spec.description, spec.color);
    let hits = query(db, &text, &filter, TOP_K).expect("filter is non-empty and k > 0");
    let no_match = || PopulateError::NoMatch {
        description: spec.description.clone(),
        color: spec.color.clone(),
        room: room_category.to_string(),
    };
    if hits.is_empty() {
        return Err(no_match());
    }
    let pick = match hits.choose_weighted(rng, |h| h.score.max(0.0)) {
        Ok(h) => h,
        // all scores non-positive: keep the ranking order
        Err(_) => &hits[0],
    };
    Ok(pick.record)
}

/// A parametric box standing in for an unmatched asset.
pub fn generic_box(spec: &AssetSpec) -> ModelRecord {
    let [w, d, h] = spec.size;
    ModelRecord {
        id: GENERIC_BOX_ID.into(),
        description: format!("{} {}", spec.color, spec.description),
        footprint_hull: Rect::from_xywh(-w / 2.0, -d / 2.0, w, d).corners(),
        height: h,
        color_materials: vec![(spec.color.clone(), "generic".into())],
        room_affinity: BTreeMap::new(),
        tags: vec!["obstacle".into(), "generic".into()],
        payload_ref: String::new(),
    }
}

/// The model chosen for one zone.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub zone: usize,
    pub model_id: String,
    pub hull: Vec<Point>,
    pub substitute: bool,
}

/// Database stage: one model per zone of `fp`, in zone order.
pub fn select_models<R: Rng + ?Sized>(fp: &FloorPlan, db: &ModelBundle, rng: &mut R) -> Vec<Selection> {
    fp.zones
        .iter()
        .enumerate()
        .map(|(zi, zone)| {
            let room = fp.room(&zone.room_id).expect("zone refers to a room of the plan");
            let spec = &room.assets[zone.asset_index];
            match select_model(db, spec, &room.category, rng) {
                Ok(r) => {
                    Selection { zone: zi, model_id: r.id.clone(), hull: r.footprint_hull.clone(), substitute: false }
                }
                Err(_) => {
                    let b = generic_box(spec);
                    Selection { zone: zi, model_id: b.id, hull: b.footprint_hull, substitute: true }
                }
            }
        })
        .collect()
}

/// Fitting stage: places each selection in its zone, sequentially with one
/// shared collision state per world.
pub fn fit_selections<R: Rng + ?Sized>(
    fp: &FloorPlan,
    selections: &[Selection],
    rng: &mut R,
) -> (Vec<Placement>, PopulationReport) {
    let mut placements: Vec<Placement> = Vec::new();
    let mut report = PopulationReport::default();
    for sel in selections {
        let zone = &fp.zones[sel.zone];
        let aref = AssetRef { room_id: zone.room_id.clone(), asset_index: zone.asset_index };
        if sel.substitute {
            report.no_match.push(aref.clone());
        }
        let obstacles: Vec<Vec<Point>> =
            placements.iter().filter(|p| p.room_id == zone.room_id).map(|p| p.world_hull.clone()).collect();
        let res = fit_into_zone(&zone.polygon, std::slice::from_ref(&sel.hull), &obstacles, rng);
        match res.fits[0] {
            Some(f) => placements.push(Placement {
                model_id: sel.model_id.clone(),
                position: f.position,
                rotation: f.quarter_turns as u16 * 90,
                world_hull: transform(&sel.hull, f.quarter_turns, f.position),
                zone_ref: zone.id.clone(),
                room_id: zone.room_id.clone(),
                asset_index: zone.asset_index,
                substitute: sel.substitute,
            }),
            None => report.unfit.push(aref),
        }
    }
    for u in &fp.report.unzoned {
        report.unfit.push(AssetRef { room_id: u.room_id.clone(), asset_index: u.asset_index });
    }
    report.unfit.sort();
    for (i, a) in placements.iter().enumerate() {
        for b in &placements[i + 1..] {
            if a.zone_ref != b.zone_ref && hulls_intersect(&a.world_hull, &b.world_hull) {
                report.cross_zone_collisions += 1;
            }
        }
    }
    debug_assert_eq!(report.cross_zone_collisions, 0, "zones overlap");
    (placements, report)
}

/// [`select_models`] followed by [`fit_selections`].
pub fn place_assets<R: Rng + ?Sized>(
    fp: &FloorPlan,
    db: &ModelBundle,
    rng: &mut R,
) -> (Vec<Placement>, PopulationReport) {
    let selections = select_models(fp, db, rng);
    fit_selections(fp, &selections, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::LayoutConfig;
    use crate::graph::{RoomNode, SceneGraph, WorldContext};
    use crate::layout::synthesize_floorplan;
    use crate::modeldb::defaults::default_bundle_ref;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_spec_finds_its_model() {
        let db = default_bundle_ref();
        let spec = AssetSpec::new("hospital bed", [1.9, 0.9, 0.7], "white");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = select_model(db, &spec, "ward", &mut rng).unwrap();
        assert!(r.description.contains("bed"), "{}", r.description);
        assert!(r.affinity("ward") > 0.0);
    }

    #[test]
    fn oversized_filter_gives_no_match() {
        let db = default_bundle_ref();
        let spec = AssetSpec::new("chair", [0.01, 0.01, 0.5], "red");
        let err = select_model(db, &spec, "ward", &mut ChaCha8Rng::seed_from_u64(0)).unwrap_err();
        assert!(matches!(err, PopulateError::NoMatch { .. }));
    }

    #[test]
    fn empty_world_is_empty() {
        let g = SceneGraph::new(
            WorldContext::Generic,
            1,
            vec![RoomNode::new("r0", "room", vec![])],
            vec![],
            vec!["r0".into()],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fp = synthesize_floorplan(&g, &LayoutConfig::default(), &mut rng).unwrap();
        let (p, rep) = place_assets(&fp, default_bundle_ref(), &mut rng);
        assert!(p.is_empty());
        assert_eq!(rep, PopulationReport::default());
    }
}
