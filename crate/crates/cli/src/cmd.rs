//! Command-line front end.

use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use scenegen_core::export::read_world_bundle;
use scenegen_core::modeldb::defaults::{default_bundle, write_default_manifests};
use scenegen_core::modeldb::{build_bundle, query, ModelBundle, QueryFilter};
use scenegen_core::pipeline::{run_pipeline, Engine, GenerateBody, WorldStore, STORE_ENV};
use scenegen_core::{
    evaluate_corpus, extract_scene_graph, parse_annotation, serialize_scene_graph, validate_world, CategoryMap,
    GenConfig, WorldBundle,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "scenegen", version, about = "Seeded indoor world generator")]
pub struct Cli {
    /// Generation config (TOML); defaults apply to missing keys.
    #[arg(long, global = true, env = "SCENEGEN_CONFIG")]
    pub config: Option<PathBuf>,
    /// World store directory.
    #[arg(long, global = true, env = STORE_ENV, default_value = "worlds")]
    pub store: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate worlds from a prompt, a generation spec or a scene graph.
    Generate(GenerateArgs),
    /// Convert a segmentation annotation into a scene graph.
    Extract {
        /// Annotation JSON file.
        input: PathBuf,
        /// Category map JSON replacing the built-in one.
        #[arg(long)]
        category_map: Option<PathBuf>,
        /// Output file; stdout when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Model database tools.
    #[command(subcommand)]
    Db(DbCommand),
    /// Metrics CSV over stored worlds or bundle paths.
    Eval {
        /// World ids or bundle paths (directory or archive).
        worlds: Vec<String>,
        /// Evaluate every world in the store.
        #[arg(long, conflicts_with = "worlds")]
        all: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: std::net::IpAddr,
        /// Model database bundle; the built-in one when absent.
        #[arg(long)]
        bundle: Option<PathBuf>,
    },
    /// Run the geometric and graph validators over worlds.
    Validate {
        /// World ids or bundle paths.
        #[arg(required = true)]
        worlds: Vec<String>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "input")]
pub struct InputArgs {
    /// Free-text request, e.g. "Generate 50 indoor worlds with 8 difficulty levels."
    #[arg(long)]
    prompt: Option<String>,
    /// Generation spec JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Scene graph JSON file.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Overrides the seed of the prompt or spec.
    #[arg(long)]
    seed: Option<u64>,
    /// Model database bundle; the built-in one when absent.
    #[arg(long)]
    bundle: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DbCommand {
    /// Write the built-in manifests and payloads into a directory.
    Seed {
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a bundle from a manifest directory.
    Build {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ranked text query with hard filters.
    Query {
        text: String,
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long)]
        color: Option<String>,
        #[arg(long = "tag")]
        tags: Vec<String>,
        #[arg(long)]
        room: Option<String>,
        #[arg(long, default_value_t = 0.0, requires = "room")]
        min_affinity: f64,
    },
}

/// A failed command: message and exit code.
#[derive(Debug)]
pub struct Failure(pub i32, pub String);

fn usage(m: impl std::fmt::Display) -> Failure {
    Failure(EXIT_USAGE, m.to_string())
}

fn invalid(m: impl std::fmt::Display) -> Failure {
    Failure(EXIT_INVALID, m.to_string())
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(|e| usage(e.to_string()))
        }
    }
}

fn load_db(path: Option<&Path>) -> Result<ModelBundle, Failure> {
    match path {
        Some(p) => ModelBundle::read(p).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => Ok(default_bundle()),
    }
}

fn load_worlds(store: &WorldStore, refs: &[String]) -> Result<Vec<WorldBundle>, Failure> {
    refs.iter()
        .map(|r| {
            let p = Path::new(r);
            if p.exists() {
                read_world_bundle(p).map_err(|e| invalid(format!("{r}: {e}")))
            } else {
                store
                    .get(r)
                    .map_err(|e| invalid(format!("{r}: {e}")))?
                    .ok_or_else(|| usage(format!("{r}: no such world in {}", store.root().display())))
            }
        })
        .collect()
}

fn json_line<T: serde::Serialize>(v: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("serializable");
    out.push(b'\n');
    out
}

pub fn execute(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(p) => GenConfig::load(p).map_err(usage)?,
        None => GenConfig::default(),
    };
    let store = WorldStore::new(&cli.store);
    match cli.command {
        Command::Generate(a) => {
            let read_json = |p: &PathBuf| -> Result<serde_json::Value, Failure> {
                serde_json::from_slice(&read(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))
            };
            let spec = a.input.spec.as_ref().map(read_json).transpose()?;
            let body = GenerateBody {
                prompt: a.input.prompt,
                spec: spec.map(serde_json::from_value).transpose().map_err(usage)?,
                graph: a.input.graph.as_ref().map(read_json).transpose()?,
                seed: a.seed,
                bundle: None,
            };
            let req = body.into_request().map_err(usage)?;
            let engine = Engine::new(cfg, Arc::new(load_db(a.bundle.as_deref())?));
            let res = run_pipeline(&engine, &req, &store).map_err(usage)?;
            write_out(
                None,
                &json_line(&serde_json::json!({
                    "store": store.root(),
                    "worldIds": res.world_ids(),
                    "timings": res.timings,
                    "failures": res.failures,
                })),
            )?;
            if res.failures.is_empty() {
                Ok(())
            } else {
                Err(invalid(format!("{} world(s) failed", res.failures.len())))
            }
        }
        Command::Extract { input, category_map, out } => {
            let map = match category_map {
                Some(p) => CategoryMap::from_json(&read(&p)?).map_err(usage)?,
                None => CategoryMap::default_map(),
            };
            let seg = parse_annotation(&read(&input)?).map_err(invalid)?;
            let g = extract_scene_graph(&seg, &map).map_err(invalid)?;
            let mut bytes = serialize_scene_graph(&g);
            bytes.push(b'\n');
            write_out(out.as_deref(), &bytes)
        }
        Command::Db(DbCommand::Seed { out }) => {
            let n = write_default_manifests(&out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
            eprintln!("wrote {n} manifests to {}", out.display());
            Ok(())
        }
        Command::Db(DbCommand::Build { manifest, out }) => {
            let db = build_bundle(&manifest).map_err(invalid)?;
            db.write(&out).map_err(usage)?;
            eprintln!("{} records, digest {}", db.len(), db.digest().map_err(usage)?);
            Ok(())
        }
        Command::Db(DbCommand::Query { text, bundle, k, color, tags, room, min_affinity }) => {
            let db = load_db(bundle.as_deref())?;
            let filter = QueryFilter { color, tags, room, min_affinity, max_footprint: None };
            let hits = query(&db, &text, &filter, k).map_err(usage)?;
            let rows: Vec<_> =
                hits.iter().map(|h| serde_json::json!({ "score": h.score, "record": h.record })).collect();
            write_out(None, &json_line(&rows))
        }
        Command::Eval { worlds, all, out } => {
            let refs = if all { store.ids() } else { worlds };
            if refs.is_empty() {
                return Err(usage("no worlds to evaluate"));
            }
            let bundles = load_worlds(&store, &refs)?;
            write_out(out.as_deref(), evaluate_corpus(&bundles).to_csv().as_bytes())
        }
        Command::Serve { port, bind, bundle } => {
            let state = Arc::new(crate::api::AppState::new(cfg, load_db(bundle.as_deref())?, store));
            let rt = tokio::runtime::Runtime::new().map_err(usage)?;
            rt.block_on(crate::api::serve(state, (bind, port).into())).map_err(usage)
        }
        Command::Validate { worlds } => {
            let bundles = load_worlds(&store, &worlds)?;
            let mut bad = 0;
            for w in &bundles {
                let r = validate_world(w, &cfg.scenario);
                if r.ok() {
                    println!("{} ok", w.id);
                } else {
                    bad += 1;
                    println!("{} {} violation(s)", w.id, r.violations.len());
                    for v in &r.violations {
                        println!("  {:?}: {}", v.check, v.detail);
                    }
                }
            }
            if bad == 0 {
                Ok(())
            } else {
                Err(invalid(format!("{bad} of {} world(s) failed validation", bundles.len())))
            }
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}
