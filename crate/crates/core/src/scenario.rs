//! Pedestrian scenarios: agents with roles, behaviors, spawn poses, goal
//! sequences and interactions, sampled from the free space of a populated
//! world.
//!
//! Document layout (YAML):
//!
//! ```yaml
//! agents:
//!   - id: agent_0
//!     role: nurse
//!     behavior: regular
//!     model_id: human-nurse-in-blue-scrubs
//!     spawn_room: room_3
//!     init_pose: [1.25, 4.1, 0.785]
//!     goals: [[6.0, 2.5], [9.1, 7.3]]
//!     goal_rooms: [room_1, room_4]
//!     interactions:
//!       - kind: converse
//!         with_agent: agent_2
//!       - kind: attend
//!         with_zone: room_3/z0
//! skipped:
//!   - id: agent_5
//!     reason: no free space in room_7
//! ```

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

use crate::config::ScenarioConfig;
use crate::geom::{boundary_distance, edges, point_in_convex, point_in_polygon, round3, Point, Rect};
use crate::graph::{SceneGraph, WorldContext};
use crate::layout::FloorPlan;
use crate::modeldb::ModelBundle;
use crate::populate::Placement;

pub const BEHAVIORS: [&str; 6] = ["regular", "impassive", "surprised", "scared", "curious", "threatening"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("no free space after {0} attempts")]
    NoFreeSpace(u32),
    #[error("degenerate region")]
    DegenerateRegion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionKind {
    Converse,
    Queue,
    Attend,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interaction {
    pub kind: InteractionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub with_agent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub with_zone: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub id: String,
    pub role: String,
    pub behavior: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_id: Option<String>,
    pub spawn_room: String,
    /// x, y, yaw.
    pub init_pose: [f64; 3],
    pub goals: Vec<[f64; 2]>,
    pub goal_rooms: Vec<String>,
    #[serde(default)]
    pub interactions: Vec<Interaction>,
}

impl Agent {
    pub fn spawn(&self) -> Point {
        Point::new(self.init_pose[0], self.init_pose[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedAgent {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Scenario {
    pub agents: Vec<Agent>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedAgent>,
}

pub fn scenario_to_yaml(s: &Scenario) -> String {
    serde_yaml::to_string(s).expect("scenario serializes")
}

pub fn scenario_from_yaml(text: &str) -> Result<Scenario, serde_yaml::Error> {
    serde_yaml::from_str(text)
}

/// Distance from `p` to a convex polygon; zero inside.
pub fn hull_distance(hull: &[Point], p: Point) -> f64 {
    if point_in_convex(hull, p, 0.0) {
        return 0.0;
    }
    edges(hull).map(|e| e.distance_to(p)).fold(f64::INFINITY, f64::min)
}

/// The free-space predicate: inside `region`, at least `clearance` from its
/// boundary (the walls) and from every obstacle hull.
pub fn is_free(region: &[Point], obstacles: &[Vec<Point>], clearance: f64, p: Point) -> bool {
    point_in_polygon(region, p)
        && boundary_distance(region, p) >= clearance
        && obstacles.iter().all(|h| hull_distance(h, p) >= clearance)
}

/// Rejection sampling, uniform over the region's bounding box. Accepted points
/// are rounded to millimeters before the free-space test.
pub fn sample_point_in_zone<R: Rng + ?Sized>(
    region: &[Point],
    obstacles: &[Vec<Point>],
    clearance: f64,
    max_attempts: u32,
    rng: &mut R,
) -> Result<Point, ScenarioError> {
    let bb = Rect::bounding(region).ok_or(ScenarioError::DegenerateRegion)?;
    if bb.width() <= 0.0 || bb.height() <= 0.0 {
        return Err(ScenarioError::DegenerateRegion);
    }
    for _ in 0..max_attempts {
        let p = Point::new(round3(rng.random_range(bb.min.x..bb.max.x)), round3(rng.random_range(bb.min.y..bb.max.y)));
        if is_free(region, obstacles, clearance, p) {
            return Ok(p);
        }
    }
    Err(ScenarioError::NoFreeSpace(max_attempts))
}

fn role_table(cfg: &ScenarioConfig, ctx: WorldContext) -> Vec<(String, f64)> {
    match cfg.roles.get(ctx.as_str()) {
        Some(t) if !t.is_empty() => t.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        _ => vec![("pedestrian".to_string(), 1.0)],
    }
}

fn draw_behavior<R: Rng + ?Sized>(cfg: &ScenarioConfig, rng: &mut R) -> &'static str {
    if rng.random_bool(cfg.regular_weight.clamp(0.0, 1.0)) {
        BEHAVIORS[0]
    } else {
        BEHAVIORS[1..].choose(rng).copied().expect("non-empty")
    }
}

/// Generates `pedestrians` agents. Goal rooms are drawn from the rooms
/// reachable from the spawn room in `realized`. Agents whose spawn cannot be
/// sampled are listed in `skipped`.
pub fn generate_scenario<R: Rng + ?Sized>(
    fp: &FloorPlan,
    realized: &SceneGraph,
    placements: &[Placement],
    pedestrians: u32,
    cfg: &ScenarioConfig,
    db: Option<&ModelBundle>,
    rng: &mut R,
) -> Scenario {
    let mut out = Scenario::default();
    if pedestrians == 0 || fp.rooms.is_empty() {
        return out;
    }
    let mut obstacles: BTreeMap<&str, Vec<Vec<Point>>> = BTreeMap::new();
    for p in placements {
        obstacles.entry(p.room_id.as_str()).or_default().push(p.world_hull.clone());
    }
    let none: Vec<Vec<Point>> = Vec::new();
    let sample = |room_id: &str, rng: &mut R| {
        let room = fp.room(room_id).expect("room exists");
        let obs = obstacles.get(room_id).unwrap_or(&none);
        sample_point_in_zone(&room.polygon, obs, cfg.clearance, cfg.max_attempts, rng)
    };
    let roles = role_table(cfg, fp.context);
    let room_ids: Vec<&str> = fp.rooms.iter().map(|r| r.id.as_str()).collect();
    for i in 0..pedestrians {
        let id = format!("agent_{i}");
        let role = roles.choose_weighted(rng, |r| r.1).map(|r| r.0.clone()).unwrap_or_else(|_| roles[0].0.clone());
        let behavior = draw_behavior(cfg, rng).to_string();
        let model_id = db.and_then(|db| {
            let humans: Vec<&str> =
                db.records().iter().filter(|r| r.has_tag("human") && r.has_tag(&role)).map(|r| r.id.as_str()).collect();
            humans.choose(rng).map(|s| s.to_string())
        });
        let spawn_room = room_ids.choose(rng).copied().expect("rooms non-empty");
        let spawn = match sample(spawn_room, rng) {
            Ok(p) => p,
            Err(e) => {
                out.skipped.push(SkippedAgent { id, reason: format!("{e} in {spawn_room}") });
                continue;
            }
        };
        let yaw = round3(rng.random_range(-PI..PI));
        let mut others: Vec<String> =
            realized.reachable_from(spawn_room).into_iter().filter(|r| r != spawn_room).collect();
        others.shuffle(rng);
        let want = rng.random_range(cfg.min_goals..=cfg.max_goals.max(cfg.min_goals));
        let mut goals = Vec::new();
        let mut goal_rooms = Vec::new();
        for r in &others {
            if goals.len() == want {
                break;
            }
            if let Ok(p) = sample(r, rng) {
                goals.push([p.x, p.y]);
                goal_rooms.push(r.clone());
            }
        }
        if goals.is_empty() {
            // single-room world, or no reachable room had space
            if let Ok(p) = sample(spawn_room, rng) {
                goals.push([p.x, p.y]);
                goal_rooms.push(spawn_room.to_string());
            }
        }
        if goals.is_empty() {
            out.skipped.push(SkippedAgent { id, reason: format!("no goal could be sampled from {spawn_room}") });
            continue;
        }
        let mut interactions = Vec::new();
        let spawn_zones: Vec<&str> = fp.zones_of(spawn_room).map(|z| z.id.as_str()).collect();
        if !spawn_zones.is_empty() && rng.random_bool(cfg.attend_probability) {
            let z = spawn_zones.choose(rng).expect("non-empty");
            interactions.push(Interaction {
                kind: InteractionKind::Attend,
                with_agent: None,
                with_zone: Some(z.to_string()),
            });
        }
        let goal_zones: Vec<&str> = fp.zones_of(&goal_rooms[0]).map(|z| z.id.as_str()).collect();
        if !goal_zones.is_empty() && rng.random_bool(cfg.queue_probability) {
            let z = goal_zones.choose(rng).expect("non-empty");
            interactions.push(Interaction {
                kind: InteractionKind::Queue,
                with_agent: None,
                with_zone: Some(z.to_string()),
            });
        }
        out.agents.push(Agent {
            id,
            role,
            behavior,
            model_id,
            spawn_room: spawn_room.to_string(),
            init_pose: [spawn.x, spawn.y, yaw],
            goals,
            goal_rooms,
            interactions,
        });
    }
    let n = out.agents.len();
    for i in 0..n {
        for j in i + 1..n {
            if out.agents[i].spawn_room == out.agents[j].spawn_room && rng.random_bool(cfg.converse_probability) {
                let (a, b) = (out.agents[i].id.clone(), out.agents[j].id.clone());
                out.agents[i].interactions.push(Interaction {
                    kind: InteractionKind::Converse,
                    with_agent: Some(b),
                    with_zone: None,
                });
                out.agents[j].interactions.push(Interaction {
                    kind: InteractionKind::Converse,
                    with_agent: Some(a),
                    with_zone: None,
                });
            }
        }
    }
    out
}
