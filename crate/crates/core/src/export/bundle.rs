//! World bundles: every artifact of one generated world, written as a
//! directory or a deterministic zip archive.
//!
//! Files, in write order:
//!
//! | file              | content                                         |
//! |-------------------|-------------------------------------------------|
//! | `provenance.json` | inputs that determine the world; hashed into the id |
//! | `graph.json`      | requested scene graph                           |
//! | `realized.json`   | scene graph achieved by the floor plan          |
//! | `floorplan.json`  | rooms, doorways, zones, layout report           |
//! | `placements.json` | `{ "placements": [...], "report": {...} }`      |
//! | `scenario.yaml`   | pedestrian scenario                             |
//! | `map.pgm`         | occupancy raster (P5)                           |
//! | `map.yaml`        | raster metadata                                 |
//! | `world.svg`       | top-down render                                 |
//!
//! The last three are derived from the others and regenerated on write.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Cursor, Read, Write};
use std::path::Path;
use thiserror::Error;
use zip::write::SimpleFileOptions;
use zip::{CompressionMethod, DateTime, ZipArchive, ZipWriter};

use super::occupancy::{export_occupancy_grid, parse_pgm, FREE, OCCUPIED, UNKNOWN};
use super::svg::export_svg;
use crate::graph::{parse_scene_graph, serialize_scene_graph, SceneGraph, WorldContext};
use crate::layout::{floorplan_from_json, floorplan_to_json, FloorPlan};
use crate::modeldb::hex_digest;
use crate::populate::{Placement, PopulationReport};
use crate::scenario::{scenario_from_yaml, scenario_to_yaml, Scenario};

pub const BUNDLE_FILES: [&str; 9] = [
    "provenance.json",
    "graph.json",
    "realized.json",
    "floorplan.json",
    "placements.json",
    "scenario.yaml",
    "map.pgm",
    "map.yaml",
    "world.svg",
];

/// Everything that determines a world. Wall-clock timings are kept out so the
/// id and the archive bytes depend on inputs only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub generator: String,
    pub generator_version: String,
    /// `prompt`, `spec` or `graph`.
    pub input_kind: String,
    pub prompt: Option<String>,
    /// SHA-256 of the canonical request input.
    pub input_digest: String,
    pub seed: u64,
    pub world_index: usize,
    pub level: u32,
    pub context: WorldContext,
    pub db_digest: String,
    pub config_digest: String,
}

impl Provenance {
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("provenance serializes")
    }

    /// Content-addressed world id.
    pub fn world_id(&self) -> String {
        hex_digest(&self.canonical_bytes())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldBundle {
    pub id: String,
    pub provenance: Provenance,
    pub graph: SceneGraph,
    pub realized: SceneGraph,
    pub floorplan: FloorPlan,
    pub placements: Vec<Placement>,
    pub population: PopulationReport,
    pub scenario: Scenario,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlacementsDoc {
    placements: Vec<Placement>,
    report: PopulationReport,
}

#[derive(Debug, Error)]
pub enum BundleIoError {
    #[error("corrupt bundle: {file}: {reason}")]
    CorruptBundle { file: String, reason: String },
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("archive error: {0}")]
    Zip(#[from] zip::result::ZipError),
}

fn corrupt(file: &str, reason: impl ToString) -> BundleIoError {
    BundleIoError::CorruptBundle { file: file.to_string(), reason: reason.to_string() }
}

fn pretty<T: Serialize>(v: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("serializes");
    out.push(b'\n');
    out
}

impl WorldBundle {
    pub fn title(&self) -> String {
        format!("{} level {} seed {}", self.provenance.context.as_str(), self.provenance.level, self.provenance.seed)
    }

    /// All bundle files with their bytes, in [`BUNDLE_FILES`] order.
    pub fn files(&self) -> Vec<(&'static str, Vec<u8>)> {
        let grid = export_occupancy_grid(&self.floorplan, &self.placements);
        let svg = export_svg(&self.floorplan, &self.placements, &self.scenario, &self.title());
        vec![
            ("provenance.json", pretty(&self.provenance)),
            ("graph.json", serialize_scene_graph(&self.graph)),
            ("realized.json", serialize_scene_graph(&self.realized)),
            ("floorplan.json", floorplan_to_json(&self.floorplan)),
            (
                "placements.json",
                pretty(&PlacementsDoc { placements: self.placements.clone(), report: self.population.clone() }),
            ),
            ("scenario.yaml", scenario_to_yaml(&self.scenario).into_bytes()),
            ("map.pgm", grid.to_pgm()),
            ("map.yaml", grid.map_yaml("map.pgm").into_bytes()),
            ("world.svg", svg.into_bytes()),
        ]
    }

    /// Parses files in [`BUNDLE_FILES`] order; the first missing or malformed
    /// one is reported.
    pub fn from_files(files: &BTreeMap<String, Vec<u8>>) -> Result<Self, BundleIoError> {
        let get = |name: &str| files.get(name).ok_or_else(|| corrupt(name, "missing"));
        let provenance: Provenance =
            serde_json::from_slice(get("provenance.json")?).map_err(|e| corrupt("provenance.json", e))?;
        let graph = parse_scene_graph(get("graph.json")?).map_err(|e| corrupt("graph.json", e))?;
        let realized = parse_scene_graph(get("realized.json")?).map_err(|e| corrupt("realized.json", e))?;
        let floorplan = floorplan_from_json(get("floorplan.json")?).map_err(|e| corrupt("floorplan.json", e))?;
        let pd: PlacementsDoc =
            serde_json::from_slice(get("placements.json")?).map_err(|e| corrupt("placements.json", e))?;
        let text = std::str::from_utf8(get("scenario.yaml")?).map_err(|e| corrupt("scenario.yaml", e))?;
        let scenario = scenario_from_yaml(text).map_err(|e| corrupt("scenario.yaml", e))?;
        let (_, _, px) = parse_pgm(get("map.pgm")?).map_err(|e| corrupt("map.pgm", e))?;
        if let Some(v) = px.iter().find(|v| ![OCCUPIED, UNKNOWN, FREE].contains(v)) {
            return Err(corrupt("map.pgm", format!("unexpected cell value {v}")));
        }
        let my: serde_yaml::Value = serde_yaml::from_slice(get("map.yaml")?).map_err(|e| corrupt("map.yaml", e))?;
        for key in ["image", "resolution", "origin", "negate", "occupied_thresh", "free_thresh"] {
            if my.get(key).is_none() {
                return Err(corrupt("map.yaml", format!("missing key {key}")));
            }
        }
        let svg = get("world.svg")?;
        if !svg.starts_with(b"<svg") || !svg.trim_ascii_end().ends_with(b"</svg>") {
            return Err(corrupt("world.svg", "not an svg document"));
        }
        Ok(Self {
            id: provenance.world_id(),
            provenance,
            graph,
            realized,
            floorplan,
            placements: pd.placements,
            population: pd.report,
            scenario,
        })
    }

    pub fn write_dir(&self, dir: &Path) -> Result<(), BundleIoError> {
        let io = |e: std::io::Error| BundleIoError::Io { path: dir.display().to_string(), source: e };
        std::fs::create_dir_all(dir).map_err(io)?;
        for (name, bytes) in self.files() {
            std::fs::write(dir.join(name), bytes).map_err(io)?;
        }
        Ok(())
    }

    pub fn read_dir(dir: &Path) -> Result<Self, BundleIoError> {
        let mut files = BTreeMap::new();
        for name in BUNDLE_FILES {
            let p = dir.join(name);
            match std::fs::read(&p) {
                Ok(b) => {
                    files.insert(name.to_string(), b);
                }
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(e) => return Err(BundleIoError::Io { path: p.display().to_string(), source: e }),
            }
        }
        Self::from_files(&files)
    }

    /// Zip archive with fixed entry order and timestamps.
    pub fn to_archive(&self) -> Result<Vec<u8>, BundleIoError> {
        let opts = SimpleFileOptions::default()
            .compression_method(CompressionMethod::Deflated)
            .last_modified_time(DateTime::default())
            .unix_permissions(0o644);
        let mut zw = ZipWriter::new(Cursor::new(Vec::new()));
        for (name, bytes) in self.files() {
            zw.start_file(name, opts)?;
            zw.write_all(&bytes).map_err(|e| BundleIoError::Io { path: name.into(), source: e })?;
        }
        Ok(zw.finish()?.into_inner())
    }

    pub fn from_archive(bytes: &[u8]) -> Result<Self, BundleIoError> {
        let mut za = ZipArchive::new(Cursor::new(bytes))?;
        let mut files = BTreeMap::new();
        for i in 0..za.len() {
            let mut f = za.by_index(i)?;
            let name = f.name().to_string();
            let mut buf = Vec::new();
            f.read_to_end(&mut buf).map_err(|e| corrupt(&name, e))?;
            files.insert(name, buf);
        }
        Self::from_files(&files)
    }
}

pub fn write_world_bundle(world: &WorldBundle, dir: &Path) -> Result<(), BundleIoError> {
    world.write_dir(dir)
}

pub fn read_world_bundle(path: &Path) -> Result<WorldBundle, BundleIoError> {
    if path.is_dir() {
        WorldBundle::read_dir(path)
    } else {
        let bytes =
            std::fs::read(path).map_err(|e| BundleIoError::Io { path: path.display().to_string(), source: e })?;
        WorldBundle::from_archive(&bytes)
    }
}
