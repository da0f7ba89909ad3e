//! Mutable copy of the database manifests for annotation edits. Edits take
//! effect only when the staging area is rebuilt into a new bundle.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use thiserror::Error;

use super::{build_from_manifests, record_from_manifest, BuildError, Manifest, ModelBundle};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnotationUpdate {
    /// Rejects the edit unless the entry is still at this revision.
    pub expected_revision: Option<u64>,
    pub description: Option<String>,
    pub color_materials: Option<Vec<(String, String)>>,
    pub room_affinity: Option<BTreeMap<String, f64>>,
    pub tags: Option<Vec<String>>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StagingError {
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("revision conflict: expected {expected}, current {current}")]
    Conflict { expected: u64, current: u64 },
    #[error("invalid annotation: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone)]
struct Entry {
    manifest: Manifest,
    payload: Vec<u8>,
    revision: u64,
}

#[derive(Debug, Clone, Default)]
pub struct Staging {
    entries: BTreeMap<String, Entry>,
    /// Bumped on every accepted edit.
    generation: u64,
}

impl Staging {
    pub fn from_bundle(b: &ModelBundle) -> Self {
        let entries = b
            .records()
            .iter()
            .map(|r| {
                let manifest = Manifest {
                    id: r.id.clone(),
                    description: r.description.clone(),
                    footprint_points: r.footprint_hull.iter().map(|p| [p.x, p.y]).collect(),
                    height: r.height,
                    color_materials: r.color_materials.clone(),
                    room_affinity: r.room_affinity.clone(),
                    tags: r.tags.clone(),
                    payload: format!("{}.bin", r.id),
                };
                let payload = b.payload(&r.id).unwrap_or_default().to_vec();
                (r.id.clone(), Entry { manifest, payload, revision: 0 })
            })
            .collect();
        Self { entries, generation: 0 }
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn revision(&self, id: &str) -> Option<u64> {
        self.entries.get(id).map(|e| e.revision)
    }

    pub fn manifest(&self, id: &str) -> Option<&Manifest> {
        self.entries.get(id).map(|e| &e.manifest)
    }

    /// Applies an edit and returns the entry's new revision.
    pub fn apply(&mut self, id: &str, u: AnnotationUpdate) -> Result<u64, StagingError> {
        let entry = self.entries.get_mut(id).ok_or_else(|| StagingError::UnknownModel(id.to_string()))?;
        if let Some(expected) = u.expected_revision {
            if expected != entry.revision {
                return Err(StagingError::Conflict { expected, current: entry.revision });
            }
        }
        let mut m = entry.manifest.clone();
        if let Some(d) = u.description {
            m.description = d;
        }
        if let Some(cm) = u.color_materials {
            m.color_materials = cm;
        }
        if let Some(a) = u.room_affinity {
            m.room_affinity = a;
        }
        if let Some(t) = u.tags {
            m.tags = t;
        }
        record_from_manifest(&m).map_err(StagingError::Invalid)?;
        entry.manifest = m;
        entry.revision += 1;
        self.generation += 1;
        Ok(entry.revision)
    }

    pub fn build(&self) -> Result<ModelBundle, BuildError> {
        build_from_manifests(
            self.entries
                .values()
                .map(|e| {
                    (PathBuf::from(format!("<staging>/{}.json", e.manifest.id)), e.manifest.clone(), e.payload.clone())
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modeldb::defaults::default_bundle;
    use crate::modeldb::{query, QueryFilter};

    #[test]
    fn edit_then_rebuild_is_queryable() {
        let db = default_bundle();
        let mut st = Staging::from_bundle(&db);
        let id = db.records()[0].id.clone();
        let rev = st
            .apply(
                &id,
                AnnotationUpdate {
                    color_materials: Some(vec![("magenta".into(), "glass".into())]),
                    ..Default::default()
                },
            )
            .unwrap();
        assert_eq!(rev, 1);
        // staging does not touch the live bundle
        assert!(!db.records()[0].has_color("magenta"));
        let rebuilt = st.build().unwrap();
        let f = QueryFilter { color: Some("magenta".into()), ..Default::default() };
        let hits = query(&rebuilt, "", &f, 5).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].record.id, id);
        assert_eq!(rebuilt.len(), db.len());
    }

    #[test]
    fn stale_revision_conflicts() {
        let db = default_bundle();
        let mut st = Staging::from_bundle(&db);
        let id = db.records()[1].id.clone();
        st.apply(&id, AnnotationUpdate { tags: Some(vec!["x".into()]), ..Default::default() }).unwrap();
        let err = st
            .apply(&id, AnnotationUpdate { expected_revision: Some(0), tags: Some(vec![]), ..Default::default() })
            .unwrap_err();
        assert_eq!(err, StagingError::Conflict { expected: 0, current: 1 });
        assert!(matches!(st.apply("nope", AnnotationUpdate::default()), Err(StagingError::UnknownModel(_))));
        let bad = AnnotationUpdate { room_affinity: Some([("ward".to_string(), 2.0)].into()), ..Default::default() };
        assert!(matches!(st.apply(&id, bad), Err(StagingError::Invalid(_))));
    }
}
