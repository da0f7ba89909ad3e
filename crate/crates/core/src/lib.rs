//! Seeded indoor world generation.
//!
//! A request (text prompt, generation spec or scene graph) becomes a scene
//! graph of rooms and assets, a rectilinear floor plan with doorways and asset
//! zones, a populated world drawn from a semantic model database, and a
//! pedestrian scenario. Worlds are exported as bundles with an occupancy map
//! and an SVG render, and corpora are summarized by graph metrics.
//!
//! Every stage takes an explicit RNG, so a world is a pure function of its
//! request, seed, model database and configuration.

pub mod catalog;
pub mod config;
pub mod export;
pub mod extract;
pub mod geom;
pub mod graph;
pub mod layout;
pub mod modeldb;
pub mod pipeline;
pub mod populate;
pub mod prompt;
pub mod scenario;
pub mod validate;

pub use config::{Calibration, ConfigError, GenConfig, LayoutConfig, ScenarioConfig};
pub use export::{evaluate_corpus, MetricsReport, MetricsRow, OccupancyGrid, Provenance, WorldBundle};
pub use extract::{extract_scene_graph, parse_annotation, CategoryMap, ExtractError, SegmentationAnnotation};
pub use geom::{Point, Rect, Segment};
pub use graph::{
    compute_graph_metrics, parse_scene_graph, serialize_scene_graph, AssetSpec, Edge, GraphError, GraphMetrics,
    RoomNode, SceneGraph, ValidationError, WorldContext,
};
pub use layout::{synthesize_floorplan, synthesize_graph, Doorway, FloorPlan, LayoutError};
pub use modeldb::{query, ModelBundle, ModelRecord, QueryFilter};
pub use pipeline::{
    generate_worlds, run_pipeline, Engine, GenerateBody, GenerateInput, GenerateRequest, PipelineError, PipelineResult,
    StageTimings, WorldStore,
};
pub use populate::{place_assets, Placement, PopulationReport};
pub use prompt::{parse_prompt, DifficultyTargets, GenerationSpec};
pub use scenario::{generate_scenario, Agent, Scenario};
pub use validate::{validate_world, ValidationReport};
