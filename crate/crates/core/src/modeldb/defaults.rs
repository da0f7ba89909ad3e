//! Default database content, authored procedurally from the catalog: one
//! obstacle model per asset template and color-material variant, plus the
//! human roster.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use super::{build_from_manifests, prism_mesh, record_from_manifest, Manifest, ModelBundle};
use crate::catalog::{AssetTemplate, ASSET_TEMPLATES, HUMAN_TEMPLATES};

/// Footprint scale per variant index, so variants of one template differ
/// slightly in size.
const VARIANT_SCALE: [f64; 4] = [1.0, 0.95, 1.05, 0.9];
/// Templates with a round footprint.
const ROUND: &[&str] = &["trash bin", "potted plant", "iv stand", "water cooler"];

pub fn slug(s: &str) -> String {
    s.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_ascii_lowercase)
        .collect::<Vec<_>>()
        .join("-")
}

fn ellipse(w: f64, d: f64, n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            [round6(w / 2.0 * t.cos()), round6(d / 2.0 * t.sin())]
        })
        .collect()
}

fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

/// Box corners plus interior samples, as a scanned footprint would provide.
fn box_points(w: f64, d: f64) -> Vec<[f64; 2]> {
    let (x, y) = (round6(w / 2.0), round6(d / 2.0));
    vec![[-x, -y], [x, -y], [x, y], [-x, y], [0.0, 0.0], [x / 2.0, -y / 3.0], [-x / 3.0, y / 2.0]]
}

fn obstacle_manifests(t: &AssetTemplate) -> Vec<Manifest> {
    t.variants
        .iter()
        .enumerate()
        .map(|(i, (color, material))| {
            let s = VARIANT_SCALE[i % VARIANT_SCALE.len()];
            let (w, d) = (round6(t.size[0] * s), round6(t.size[1] * s));
            let id = slug(&format!("{} {color} {material}", t.name));
            Manifest {
                id: id.clone(),
                description: format!("{color} {material} {}", t.name),
                footprint_points: if ROUND.contains(&t.name) { ellipse(w, d, 12) } else { box_points(w, d) },
                height: round6(t.size[2] * s),
                color_materials: vec![(color.to_string(), material.to_string())],
                room_affinity: t.rooms.iter().map(|(r, a)| (r.to_string(), *a)).collect(),
                tags: vec!["obstacle".into(), slug(t.name)],
                payload: format!("{id}.bin"),
            }
        })
        .collect()
}

pub fn default_manifests() -> Vec<Manifest> {
    let mut out: Vec<Manifest> = ASSET_TEMPLATES.iter().flat_map(obstacle_manifests).collect();
    for h in HUMAN_TEMPLATES {
        let id = format!("human-{}", slug(h.description));
        out.push(Manifest {
            id: id.clone(),
            description: h.description.to_string(),
            footprint_points: ellipse(0.5, 0.35, 12),
            height: h.height,
            color_materials: vec![(h.color.to_string(), h.material.to_string())],
            room_affinity: h.rooms.iter().map(|(r, a)| (r.to_string(), *a)).collect::<BTreeMap<_, _>>(),
            tags: vec!["human".into(), h.role.to_string()],
            payload: format!("{id}.bin"),
        });
    }
    out
}

fn payload_for(m: &Manifest) -> Vec<u8> {
    let rec = record_from_manifest(m).expect("default manifests are valid");
    prism_mesh(&rec.footprint_hull, rec.height)
}

/// Writes the default manifests and payloads into `dir` as `<id>.json` and
/// `<id>.bin`.
pub fn write_default_manifests(dir: &Path) -> std::io::Result<usize> {
    std::fs::create_dir_all(dir)?;
    let ms = default_manifests();
    for m in &ms {
        let mut json = serde_json::to_vec_pretty(m).expect("manifest serializes");
        json.push(b'\n');
        std::fs::write(dir.join(format!("{}.json", m.id)), json)?;
        std::fs::write(dir.join(&m.payload), payload_for(m))?;
    }
    Ok(ms.len())
}

/// The default bundle, built in memory.
pub fn default_bundle() -> ModelBundle {
    let items = default_manifests()
        .into_iter()
        .map(|m| {
            let payload = payload_for(&m);
            (PathBuf::from(format!("<default>/{}.json", m.id)), m, payload)
        })
        .collect();
    build_from_manifests(items).expect("default manifests are valid")
}

/// Shared instance of [`default_bundle`].
pub fn default_bundle_ref() -> &'static ModelBundle {
    static DB: OnceLock<ModelBundle> = OnceLock::new();
    DB.get_or_init(default_bundle)
}
