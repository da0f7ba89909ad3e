//! Semantic model database: manifests are validated, annotated with footprint
//! hulls and text embeddings, and packed into one compressed bundle that
//! answers text + attribute queries with complete records.

pub mod bundle;
pub mod defaults;
pub mod embed;
pub mod hull;
pub mod query;
pub mod staging;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::geom::{is_convex_ccw, Point, Rect};

pub use bundle::{hex_digest, BundleError, ModelBundle, FORMAT_VERSION};
pub use embed::{embed_text, Embedder, HashEmbedder, DIM};
pub use hull::{convex_hull_2d, HullError};
pub use query::{query, QueryError, QueryFilter, ScoredRecord};

/// A model entry as authored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub id: String,
    pub description: String,
    pub footprint_points: Vec<[f64; 2]>,
    pub height: f64,
    pub color_materials: Vec<(String, String)>,
    #[serde(default)]
    pub room_affinity: BTreeMap<String, f64>,
    #[serde(default)]
    pub tags: Vec<String>,
    /// Geometry blob path, relative to the manifest file.
    pub payload: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub id: String,
    pub description: String,
    /// Convex, counter-clockwise, meters, centered on the model origin.
    pub footprint_hull: Vec<Point>,
    pub height: f64,
    pub color_materials: Vec<(String, String)>,
    pub room_affinity: BTreeMap<String, f64>,
    pub tags: Vec<String>,
    /// Archive entry holding the geometry blob.
    pub payload_ref: String,
}

impl ModelRecord {
    pub fn affinity(&self, room: &str) -> f64 {
        self.room_affinity.get(room).copied().unwrap_or(0.0)
    }

    pub fn has_color(&self, color: &str) -> bool {
        self.color_materials.iter().any(|(c, _)| c == color)
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    /// Footprint bounding box extents, smaller first.
    pub fn footprint_dims(&self) -> (f64, f64) {
        let r = Rect::bounding(&self.footprint_hull).expect("hull has vertices");
        let (a, b) = (r.width(), r.height());
        (a.min(b), a.max(b))
    }

    pub fn check(&self) -> Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if self.description.trim().is_empty() {
            return Err("empty description".into());
        }
        if !is_convex_ccw(&self.footprint_hull) {
            return Err("footprint hull is not convex counter-clockwise".into());
        }
        if !(self.height > 0.0) {
            return Err("height must be positive".into());
        }
        if self.color_materials.is_empty() {
            return Err("needs at least one color-material pair".into());
        }
        if let Some((room, w)) = self.room_affinity.iter().find(|(_, w)| !(0.0..=1.0).contains(*w)) {
            return Err(format!("affinity {w} for {room} outside [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("{path}: {reason}")]
    Manifest { path: PathBuf, reason: String },
    #[error("duplicate model id {id:?} in {first} and {second}")]
    DuplicateId { id: String, first: PathBuf, second: PathBuf },
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Turns a manifest into a record: the hull is computed from the footprint
/// points and re-centered on the bounding-box center.
pub fn record_from_manifest(m: &Manifest) -> Result<ModelRecord, String> {
    let pts: Vec<Point> = m.footprint_points.iter().map(|p| Point::from(*p)).collect();
    let hull = convex_hull_2d(&pts).map_err(|e| e.to_string())?;
    let center = Rect::bounding(&hull).expect("hull has vertices").center();
    let hull = hull.into_iter().map(|p| p - center).collect();
    let rec = ModelRecord {
        id: m.id.clone(),
        description: m.description.clone(),
        footprint_hull: hull,
        height: m.height,
        color_materials: m.color_materials.clone(),
        room_affinity: m.room_affinity.clone(),
        tags: m.tags.clone(),
        payload_ref: format!("payload/{}.bin", m.id),
    };
    rec.check()?;
    Ok(rec)
}

/// Builds a bundle from `(source path, manifest, payload bytes)` triples. The
/// path only labels errors.
pub fn build_from_manifests(items: Vec<(PathBuf, Manifest, Vec<u8>)>) -> Result<ModelBundle, BuildError> {
    let mut seen: BTreeMap<String, PathBuf> = BTreeMap::new();
    let mut entries = Vec::with_capacity(items.len());
    for (path, m, payload) in items {
        if let Some(first) = seen.get(&m.id) {
            return Err(BuildError::DuplicateId { id: m.id.clone(), first: first.clone(), second: path });
        }
        let rec = record_from_manifest(&m).map_err(|reason| BuildError::Manifest { path: path.clone(), reason })?;
        seen.insert(m.id.clone(), path);
        entries.push((rec, payload));
    }
    Ok(ModelBundle::new(entries, &HashEmbedder))
}

/// Reads every `*.json` manifest in `dir` (sorted by file name) and its
/// payload, then builds the bundle.
pub fn build_bundle(dir: &Path) -> Result<ModelBundle, BuildError> {
    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> BuildError + '_ {
        move |source| BuildError::Io { path: path.to_path_buf(), source }
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut items = Vec::with_capacity(files.len());
    for path in files {
        let text = std::fs::read(&path).map_err(io(&path))?;
        let m: Manifest = serde_json::from_slice(&text)
            .map_err(|e| BuildError::Manifest { path: path.clone(), reason: e.to_string() })?;
        let payload_path = path.parent().unwrap_or(dir).join(&m.payload);
        let payload = std::fs::read(&payload_path).map_err(|e| BuildError::Manifest {
            path: path.clone(),
            reason: format!("payload {}: {e}", payload_path.display()),
        })?;
        items.push((path, m, payload));
    }
    build_from_manifests(items)
}

/// Triangle soup of the prism over a convex footprint, as little-endian f32
/// xyz triples.
pub fn prism_mesh(hull: &[Point], height: f64) -> Vec<u8> {
    let mut tris: Vec<[f64; 3]> = Vec::new();
    let n = hull.len();
    for i in 1..n.saturating_sub(1) {
        let (a, b, c) = (hull[0], hull[i], hull[i + 1]);
        tris.extend([[a.x, a.y, 0.0], [c.x, c.y, 0.0], [b.x, b.y, 0.0]]);
        tris.extend([[a.x, a.y, height], [b.x, b.y, height], [c.x, c.y, height]]);
    }
    for i in 0..n {
        let (a, b) = (hull[i], hull[(i + 1) % n]);
        tris.extend([[a.x, a.y, 0.0], [b.x, b.y, 0.0], [b.x, b.y, height]]);
        tris.extend([[a.x, a.y, 0.0], [b.x, b.y, height], [a.x, a.y, height]]);
    }
    tris.iter().flat_map(|v| v.iter().flat_map(|c| (*c as f32).to_le_bytes())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(id: &str, desc: &str) -> Manifest {
        Manifest {
            id: id.into(),
            description: desc.into(),
            footprint_points: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 0.5], [0.0, 0.5], [0.5, 0.25]],
            height: 1.0,
            color_materials: vec![("red".into(), "plastic".into())],
            room_affinity: BTreeMap::from([("kitchen".into(), 0.5)]),
            tags: vec!["obstacle".into()],
            payload: format!("{id}.bin"),
        }
    }

    #[test]
    fn hull_is_centered() {
        let r = record_from_manifest(&manifest("a", "red chair")).unwrap();
        assert_eq!(r.footprint_hull.len(), 4);
        assert_eq!(r.footprint_dims(), (0.5, 1.0));
        assert_eq!(r.footprint_hull[0], Point::new(-0.5, -0.25));
    }

    #[test]
    fn duplicate_ids_name_both_paths() {
        let items = vec![
            (PathBuf::from("x/a.json"), manifest("m", "chair"), vec![]),
            (PathBuf::from("x/b.json"), manifest("m", "table"), vec![]),
        ];
        match build_from_manifests(items) {
            Err(BuildError::DuplicateId { first, second, .. }) => {
                assert_eq!(first, PathBuf::from("x/a.json"));
                assert_eq!(second, PathBuf::from("x/b.json"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_affinity() {
        let mut m = manifest("a", "chair");
        m.room_affinity.insert("ward".into(), 1.5);
        assert!(record_from_manifest(&m).is_err());
    }

    #[test]
    fn prism_triangle_count() {
        let hull = Rect::from_xywh(0.0, 0.0, 1.0, 1.0).corners();
        // 2 caps x 2 triangles + 4 sides x 2 triangles, 9 floats each
        assert_eq!(prism_mesh(&hull, 1.0).len(), 12 * 9 * 4);
    }
}
