//! End-to-end generation: prompt, graph, layout, model selection, fitting,
//! scenario and export, with per-stage wall-clock timings and a
//! content-addressed world store.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;
use thiserror::Error;

use crate::config::GenConfig;
use crate::export::{BundleIoError, Provenance, WorldBundle};
use crate::graph::{parse_scene_graph, serialize_scene_graph, SceneGraph};
use crate::layout::{realized_graph, synthesize_floorplan, synthesize_graph};
use crate::modeldb::{hex_digest, ModelBundle};
use crate::populate::{fit_selections, select_models};
use crate::prompt::{difficulty_targets, parse_prompt, targets_for, GenerationSpec};
use crate::scenario::generate_scenario;

pub const GENERATOR: &str = "scenegen";
pub const STORE_ENV: &str = "SCENEGEN_STORE";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("layout failure: {0}")]
    LayoutFailure(String),
    #[error("store error: {0}")]
    Store(#[from] BundleIoError),
}

/// The one input a request carries.
#[derive(Debug, Clone, PartialEq)]
pub enum GenerateInput {
    Prompt(String),
    Spec(GenerationSpec),
    Graph(SceneGraph),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateRequest {
    pub input: GenerateInput,
    /// Overrides the seed in the prompt or spec.
    pub seed: Option<u64>,
}

/// Wire form of [`GenerateRequest`]: exactly one of `prompt`, `spec`, `graph`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerateBody {
    pub prompt: Option<String>,
    pub spec: Option<GenerationSpec>,
    /// Scene-graph document.
    pub graph: Option<serde_json::Value>,
    pub seed: Option<u64>,
    /// Model database bundle to load instead of the default one.
    pub bundle: Option<PathBuf>,
}

impl GenerateBody {
    pub fn into_request(self) -> Result<GenerateRequest, PipelineError> {
        let present = [self.prompt.is_some(), self.spec.is_some(), self.graph.is_some()];
        if present.iter().filter(|p| **p).count() != 1 {
            return Err(PipelineError::InvalidRequest("exactly one of prompt, spec, graph is required".into()));
        }
        let input = if let Some(p) = self.prompt {
            GenerateInput::Prompt(p)
        } else if let Some(s) = self.spec {
            s.validate().map_err(|e| PipelineError::InvalidRequest(e.to_string()))?;
            GenerateInput::Spec(s)
        } else {
            let bytes = serde_json::to_vec(&self.graph.expect("checked above")).expect("value serializes");
            let g = parse_scene_graph(&bytes).map_err(|e| PipelineError::InvalidRequest(e.to_string()))?;
            GenerateInput::Graph(g)
        };
        Ok(GenerateRequest { input, seed: self.seed })
    }
}

/// Wall-clock milliseconds per stage.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StageTimings {
    pub prompt: f64,
    pub graph: f64,
    pub layout: f64,
    pub dbquery: f64,
    pub fit: f64,
    pub scenario: f64,
    pub export: f64,
    pub total: f64,
}

impl StageTimings {
    pub fn stage_sum(&self) -> f64 {
        self.prompt + self.graph + self.layout + self.dbquery + self.fit + self.scenario + self.export
    }

    pub fn add(&mut self, o: &StageTimings) {
        self.prompt += o.prompt;
        self.graph += o.graph;
        self.layout += o.layout;
        self.dbquery += o.dbquery;
        self.fit += o.fit;
        self.scenario += o.scenario;
        self.export += o.export;
        self.total += o.total;
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Shared, immutable generation state.
pub struct Engine {
    pub cfg: GenConfig,
    pub db: Arc<ModelBundle>,
    db_digest: String,
    config_digest: String,
}

impl Engine {
    pub fn new(cfg: GenConfig, db: Arc<ModelBundle>) -> Self {
        let db_digest = db.digest().expect("in-memory bundle serializes");
        let config_digest = hex_digest(&serde_json::to_vec(&cfg).expect("config serializes"));
        Self { cfg, db, db_digest, config_digest }
    }

    pub fn db_digest(&self) -> &str {
        &self.db_digest
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedWorld {
    pub bundle: WorldBundle,
    pub timings: StageTimings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldFailure {
    pub world_index: usize,
    pub level: u32,
    pub error: String,
}

struct Job {
    index: usize,
    level: u32,
    input: JobInput,
}

enum JobInput {
    Spec(Arc<GenerationSpec>),
    Graph(Arc<SceneGraph>),
}

/// SplitMix64 finalizer, used to derive independent stream seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of world `index` of a request with seed `seed`.
pub fn world_seed(seed: u64, index: usize) -> u64 {
    mix(mix(seed) ^ index as u64)
}

fn stage_rng(world_seed: u64, stage: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(world_seed ^ stage.wrapping_mul(0xa076_1d64_78bd_642f)))
}

/// Generates every world of a request in memory. Worlds run in parallel and
/// fail independently; results keep request order.
pub fn generate_worlds(
    engine: &Engine,
    req: &GenerateRequest,
) -> Result<Vec<Result<GeneratedWorld, WorldFailure>>, PipelineError> {
    let t0 = Instant::now();
    let (kind, prompt, input_digest, seed, jobs) = match &req.input {
        GenerateInput::Prompt(text) => {
            let spec = parse_prompt(text, false).map_err(|e| PipelineError::InvalidRequest(e.to_string()))?;
            let seed = req.seed.unwrap_or(spec.seed);
            ("prompt", Some(text.clone()), hex_digest(text.as_bytes()), seed, spec_jobs(spec))
        }
        GenerateInput::Spec(spec) => {
            spec.validate().map_err(|e| PipelineError::InvalidRequest(e.to_string()))?;
            let digest = hex_digest(&serde_json::to_vec(spec).expect("spec serializes"));
            let seed = req.seed.unwrap_or(spec.seed);
            ("spec", None, digest, seed, spec_jobs(spec.clone()))
        }
        GenerateInput::Graph(g) => {
            let digest = hex_digest(&serialize_scene_graph(g));
            let job = Job { index: 0, level: g.difficulty(), input: JobInput::Graph(Arc::new(g.clone())) };
            ("graph", None, digest, req.seed.unwrap_or(0), vec![job])
        }
    };
    let prompt_ms = ms(t0);
    let out = jobs
        .par_iter()
        .map(|job| {
            let prov = Provenance {
                generator: GENERATOR.into(),
                generator_version: env!("CARGO_PKG_VERSION").into(),
                input_kind: kind.into(),
                prompt: prompt.clone(),
                input_digest: input_digest.clone(),
                seed,
                world_index: job.index,
                level: job.level,
                context: match &job.input {
                    JobInput::Spec(s) => s.context,
                    JobInput::Graph(g) => g.context(),
                },
                db_digest: engine.db_digest.clone(),
                config_digest: engine.config_digest.clone(),
            };
            generate_one(engine, job, prov, prompt_ms).map_err(|e| WorldFailure {
                world_index: job.index,
                level: job.level,
                error: e.to_string(),
            })
        })
        .collect();
    Ok(out)
}

fn spec_jobs(spec: GenerationSpec) -> Vec<Job> {
    let spec = Arc::new(spec);
    let mut jobs = Vec::with_capacity(spec.world_count());
    for &level in &spec.levels {
        for _ in 0..spec.worlds_per_level {
            jobs.push(Job { index: jobs.len(), level, input: JobInput::Spec(spec.clone()) });
        }
    }
    jobs
}

fn generate_one(engine: &Engine, job: &Job, prov: Provenance, prompt_ms: f64) -> Result<GeneratedWorld, PipelineError> {
    let cfg = &engine.cfg;
    let start = Instant::now();
    let ws = world_seed(prov.seed, job.index);
    let mut t = StageTimings { prompt: prompt_ms, ..Default::default() };

    let s = Instant::now();
    let (graph, pedestrians) = match &job.input {
        JobInput::Spec(spec) => {
            let targets = targets_for(&cfg.calibration, spec, job.level)
                .map_err(|e| PipelineError::InvalidRequest(e.to_string()))?;
            let g = synthesize_graph(&targets, spec.context, job.level, &mut stage_rng(ws, 1));
            (g, targets.pedestrians)
        }
        JobInput::Graph(g) => {
            let targets = difficulty_targets(&cfg.calibration, g.context(), g.difficulty())
                .map_err(|e| PipelineError::InvalidRequest(e.to_string()))?;
            ((**g).clone(), targets.pedestrians)
        }
    };
    t.graph = ms(s);

    let s = Instant::now();
    let fp = synthesize_floorplan(&graph, &cfg.layout, &mut stage_rng(ws, 2))
        .map_err(|e| PipelineError::LayoutFailure(e.to_string()))?;
    let realized = realized_graph(&fp).map_err(|e| PipelineError::LayoutFailure(e.to_string()))?;
    t.layout = ms(s);

    let s = Instant::now();
    let selections = select_models(&fp, &engine.db, &mut stage_rng(ws, 3));
    t.dbquery = ms(s);

    let s = Instant::now();
    let (placements, population) = fit_selections(&fp, &selections, &mut stage_rng(ws, 4));
    t.fit = ms(s);

    let s = Instant::now();
    let scenario = generate_scenario(
        &fp,
        &realized,
        &placements,
        pedestrians,
        &cfg.scenario,
        Some(&engine.db),
        &mut stage_rng(ws, 5),
    );
    t.scenario = ms(s);

    let s = Instant::now();
    let bundle = WorldBundle {
        id: prov.world_id(),
        provenance: prov,
        graph,
        realized,
        floorplan: fp,
        placements,
        population,
        scenario,
    };
    // rendering the derived artifacts is part of export
    let files = bundle.files();
    std::hint::black_box(&files);
    t.export = ms(s);
    t.total = ms(start) + prompt_ms;
    Ok(GeneratedWorld { bundle, timings: t })
}

/// Append-only world store: one bundle directory per world id plus a
/// `timings.json` next to the bundle files.
#[derive(Debug, Clone)]
pub struct WorldStore {
    root: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl WorldStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    /// Root from `SCENEGEN_STORE`, else `./worlds`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(STORE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("worlds")))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_of(&self, id: &str) -> PathBuf {
        self.root.join(id)
    }

    pub fn valid_id(id: &str) -> bool {
        id.len() == 64 && id.bytes().all(|b| b.is_ascii_hexdigit())
    }

    pub fn contains(&self, id: &str) -> bool {
        Self::valid_id(id) && self.path_of(id).is_dir()
    }

    /// Writes the world into a temporary directory and renames it into place.
    /// An existing world with the same id is left untouched.
    pub fn put(&self, w: &GeneratedWorld) -> Result<(), PipelineError> {
        let dest = self.path_of(&w.bundle.id);
        if dest.is_dir() {
            return Ok(());
        }
        let io = |e: std::io::Error| BundleIoError::Io { path: self.root.display().to_string(), source: e };
        std::fs::create_dir_all(&self.root).map_err(io)?;
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.root.join(format!(".tmp-{}-{}-{n}", w.bundle.id, std::process::id()));
        w.bundle.write_dir(&tmp)?;
        let mut tj = serde_json::to_vec_pretty(&w.timings).expect("timings serialize");
        tj.push(b'\n');
        std::fs::write(tmp.join("timings.json"), tj).map_err(io)?;
        match std::fs::rename(&tmp, &dest) {
            Ok(()) => Ok(()),
            Err(_) if dest.is_dir() => {
                let _ = std::fs::remove_dir_all(&tmp);
                Ok(())
            }
            Err(e) => {
                let _ = std::fs::remove_dir_all(&tmp);
                Err(io(e).into())
            }
        }
    }

    pub fn get(&self, id: &str) -> Result<Option<WorldBundle>, PipelineError> {
        if !self.contains(id) {
            return Ok(None);
        }
        Ok(Some(WorldBundle::read_dir(&self.path_of(id))?))
    }

    pub fn timings(&self, id: &str) -> Option<StageTimings> {
        if !Self::valid_id(id) {
            return None;
        }
        let bytes = std::fs::read(self.path_of(id).join("timings.json")).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    /// Stored world ids, sorted.
    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = std::fs::read_dir(&self.root)
            .into_iter()
            .flatten()
            .filter_map(|e| e.ok()?.file_name().into_string().ok())
            .filter(|n| self.contains(n))
            .collect();
        ids.sort();
        ids
    }

    /// Raw bytes of one bundle file.
    pub fn file(&self, id: &str, name: &str) -> Option<Vec<u8>> {
        if !self.contains(id) || !crate::export::BUNDLE_FILES.contains(&name) {
            return None;
        }
        std::fs::read(self.path_of(id).join(name)).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldSummary {
    pub id: String,
    pub level: u32,
    pub world_index: usize,
    pub timings: StageTimings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub worlds: Vec<WorldSummary>,
    pub failures: Vec<WorldFailure>,
    /// Stage times summed over the generated worlds.
    pub timings: StageTimings,
}

impl PipelineResult {
    pub fn world_ids(&self) -> Vec<String> {
        self.worlds.iter().map(|w| w.id.clone()).collect()
    }
}

/// Generates the request's worlds and persists them in `store`.
pub fn run_pipeline(
    engine: &Engine,
    req: &GenerateRequest,
    store: &WorldStore,
) -> Result<PipelineResult, PipelineError> {
    let results = generate_worlds(engine, req)?;
    let mut out = PipelineResult { worlds: Vec::new(), failures: Vec::new(), timings: StageTimings::default() };
    for r in results {
        match r {
            Ok(w) => {
                if let Err(e) = store.put(&w) {
                    out.failures.push(WorldFailure {
                        world_index: w.bundle.provenance.world_index,
                        level: w.bundle.provenance.level,
                        error: e.to_string(),
                    });
                    continue;
                }
                out.timings.add(&w.timings);
                out.worlds.push(WorldSummary {
                    id: w.bundle.id.clone(),
                    level: w.bundle.provenance.level,
                    world_index: w.bundle.provenance.world_index,
                    timings: w.timings,
                });
            }
            Err(f) => out.failures.push(f),
        }
    }
    Ok(out)
}
