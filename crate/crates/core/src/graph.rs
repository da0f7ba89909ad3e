//! Two-level scene graph: rooms connected by doorways on top, assets attached
//! to rooms below. Includes the canonical JSON document format and the
//! structural metrics used for corpus evaluation.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

pub const DOCUMENT_VERSION: &str = "1";

/// World context token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WorldContext {
    Hospital,
    Residential,
    Office,
    Generic,
}

impl WorldContext {
    pub const ALL: [WorldContext; 4] =
        [WorldContext::Hospital, WorldContext::Residential, WorldContext::Office, WorldContext::Generic];

    pub fn as_str(self) -> &'static str {
        match self {
            WorldContext::Hospital => "hospital",
            WorldContext::Residential => "residential",
            WorldContext::Office => "office",
            WorldContext::Generic => "generic",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == token)
    }
}

impl fmt::Display for WorldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An object to place in a room.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssetSpec {
    pub description: String,
    /// Width, depth, height in meters.
    pub size: [f64; 3],
    pub color: String,
}

impl AssetSpec {
    pub fn new(description: impl Into<String>, size: [f64; 3], color: impl Into<String>) -> Self {
        Self { description: description.into(), size, color: color.into() }
    }

    fn check(&self) -> Result<(), String> {
        if self.description.trim().is_empty() {
            return Err("empty description".into());
        }
        if !self.size.iter().all(|s| s.is_finite() && *s > 0.0) {
            return Err(format!("non-positive size {:?}", self.size));
        }
        if !is_color_token(&self.color) {
            return Err(format!("bad color token {:?}", self.color));
        }
        Ok(())
    }
}

/// `[a-z][a-z0-9-]*`
pub fn is_color_token(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z')) && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-')
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoomNode {
    pub id: String,
    pub category: String,
    #[serde(default)]
    pub assets: Vec<AssetSpec>,
}

impl RoomNode {
    pub fn new(id: impl Into<String>, category: impl Into<String>, assets: Vec<AssetSpec>) -> Self {
        Self { id: id.into(), category: category.into(), assets }
    }
}

/// Unordered room pair, stored with `.0 < .1`. Serialized as a 2-element array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(pub String, pub String);

impl Edge {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn contains(&self, id: &str) -> bool {
        self.0 == id || self.1 == id
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("graph has no rooms")]
    NoRooms,
    #[error("graph has no external doorway")]
    NoExternalDoorway,
    #[error("difficulty must be >= 1")]
    InvalidDifficulty,
    #[error("unsupported document version {0:?}")]
    UnsupportedVersion(String),
    #[error("empty room id")]
    EmptyRoomId,
    #[error("duplicate room id {0:?}")]
    DuplicateRoomId(String),
    #[error("room {0:?} has an empty category")]
    EmptyCategory(String),
    #[error("self-loop edge on room {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge ({0:?}, {1:?})")]
    DuplicateEdge(String, String),
    #[error("edge endpoint {0:?} is not a room")]
    UnknownEdgeEndpoint(String),
    #[error("external doorway on unknown room {0:?}")]
    UnknownDoorwayRoom(String),
    #[error("room {room:?} asset {index}: {reason}")]
    InvalidAsset { room: String, index: usize, reason: String },
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {0}")]
    Validation(#[from] ValidationError),
}

/// The validated two-level scene graph. Immutable once constructed; rooms are
/// kept sorted by id and external doorways sorted so that structural equality
/// matches canonical-document equality.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneGraph {
    context: WorldContext,
    difficulty: u32,
    rooms: Vec<RoomNode>,
    edges: BTreeSet<Edge>,
    external_doorways: Vec<String>,
}

impl SceneGraph {
    pub fn new(
        context: WorldContext,
        difficulty: u32,
        mut rooms: Vec<RoomNode>,
        edges: impl IntoIterator<Item = Edge>,
        mut external_doorways: Vec<String>,
    ) -> Result<Self, ValidationError> {
        if difficulty < 1 {
            return Err(ValidationError::InvalidDifficulty);
        }
        if rooms.is_empty() {
            return Err(ValidationError::NoRooms);
        }
        rooms.sort_by(|a, b| a.id.cmp(&b.id));
        for w in rooms.windows(2) {
            if w[0].id == w[1].id {
                return Err(ValidationError::DuplicateRoomId(w[0].id.clone()));
            }
        }
        let ids: BTreeSet<&str> = rooms.iter().map(|r| r.id.as_str()).collect();
        for room in &rooms {
            if room.id.is_empty() {
                return Err(ValidationError::EmptyRoomId);
            }
            if room.category.trim().is_empty() {
                return Err(ValidationError::EmptyCategory(room.id.clone()));
            }
            for (index, asset) in room.assets.iter().enumerate() {
                asset.check().map_err(|reason| ValidationError::InvalidAsset {
                    room: room.id.clone(),
                    index,
                    reason,
                })?;
            }
        }
        let mut edge_set = BTreeSet::new();
        for e in edges {
            let e = Edge::new(e.0, e.1);
            if e.0 == e.1 {
                return Err(ValidationError::SelfLoop(e.0));
            }
            for end in [&e.0, &e.1] {
                if !ids.contains(end.as_str()) {
                    return Err(ValidationError::UnknownEdgeEndpoint(end.clone()));
                }
            }
            if edge_set.contains(&e) {
                return Err(ValidationError::DuplicateEdge(e.0, e.1));
            }
            edge_set.insert(e);
        }
        if external_doorways.is_empty() {
            return Err(ValidationError::NoExternalDoorway);
        }
        for d in &external_doorways {
            if !ids.contains(d.as_str()) {
                return Err(ValidationError::UnknownDoorwayRoom(d.clone()));
            }
        }
        external_doorways.sort();
        Ok(Self { context, difficulty, rooms, edges: edge_set, external_doorways })
    }

    pub fn context(&self) -> WorldContext {
        self.context
    }

    pub fn difficulty(&self) -> u32 {
        self.difficulty
    }

    pub fn rooms(&self) -> &[RoomNode] {
        &self.rooms
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn external_doorways(&self) -> &[String] {
        &self.external_doorways
    }

    pub fn room(&self, id: &str) -> Option<&RoomNode> {
        self.room_index(id).map(|i| &self.rooms[i])
    }

    pub fn room_index(&self, id: &str) -> Option<usize> {
        self.rooms.binary_search_by(|r| r.id.as_str().cmp(id)).ok()
    }

    pub fn asset_count(&self) -> usize {
        self.rooms.iter().map(|r| r.assets.len()).sum()
    }

    /// Copy with a different difficulty label.
    pub fn with_difficulty(&self, difficulty: u32) -> Result<Self, ValidationError> {
        if difficulty < 1 {
            return Err(ValidationError::InvalidDifficulty);
        }
        Ok(Self { difficulty, ..self.clone() })
    }

    /// Index-based adjacency lists; neighbor lists are sorted.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.rooms.len()];
        for Edge(a, b) in &self.edges {
            let (i, j) = (self.room_index(a).expect("validated"), self.room_index(b).expect("validated"));
            adj[i].push(j);
            adj[j].push(i);
        }
        for n in &mut adj {
            n.sort_unstable();
        }
        adj
    }

    /// Room ids reachable from `start` over doorway edges.
    pub fn reachable_from(&self, start: &str) -> BTreeSet<String> {
        let Some(s) = self.room_index(start) else {
            return BTreeSet::new();
        };
        bfs_hops(&self.adjacency(), s)
            .into_iter()
            .enumerate()
            .filter(|(_, d)| d.is_some())
            .map(|(i, _)| self.rooms[i].id.clone())
            .collect()
    }
}

/// Hop distances from `src`; `None` marks unreachable nodes.
pub fn bfs_hops(adj: &[Vec<usize>], src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued nodes have a distance");
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

// Document representation; field order defines canonical key order.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    version: String,
    context: WorldContext,
    difficulty: u32,
    rooms: Vec<RoomNode>,
    edges: Vec<[String; 2]>,
    external_doorways: Vec<String>,
}

pub fn parse_scene_graph(bytes: &[u8]) -> Result<SceneGraph, GraphError> {
    let doc: GraphDocument = serde_json::from_slice(bytes).map_err(|e| GraphError::Schema(e.to_string()))?;
    if doc.version != DOCUMENT_VERSION {
        return Err(ValidationError::UnsupportedVersion(doc.version).into());
    }
    let edges = doc
        .edges
        .into_iter()
        .map(|[a, b]| {
            if a == b {
                return Err(ValidationError::SelfLoop(a));
            }
            Ok(Edge::new(a, b))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SceneGraph::new(doc.context, doc.difficulty, doc.rooms, edges, doc.external_doorways)?)
}

/// Canonical document: pretty JSON, LF line endings, trailing newline.
pub fn serialize_scene_graph(g: &SceneGraph) -> Vec<u8> {
    let doc = GraphDocument {
        version: DOCUMENT_VERSION.to_string(),
        context: g.context,
        difficulty: g.difficulty,
        rooms: g.rooms.clone(),
        edges: g.edges.iter().map(|e| [e.0.clone(), e.1.clone()]).collect(),
        external_doorways: g.external_doorways.clone(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("graph document serializes");
    out.push(b'\n');
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub rooms: usize,
    pub leaf_rooms: usize,
    pub assets: usize,
    pub edges: usize,
    /// Longest shortest-path hop count; 0 for one room, -1 if disconnected.
    pub diameter: i64,
    pub connected: bool,
    pub difficulty: u32,
}

pub fn compute_graph_metrics(g: &SceneGraph) -> GraphMetrics {
    let adj = g.adjacency();
    let mut degree: BTreeMap<&str, usize> = BTreeMap::new();
    for Edge(a, b) in g.edges() {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
    }
    let leaf_rooms = degree.values().filter(|&&d| d == 1).count();

    let mut connected = true;
    let mut diameter = 0usize;
    for s in 0..adj.len() {
        for d in bfs_hops(&adj, s) {
            match d {
                Some(d) => diameter = diameter.max(d),
                None => connected = false,
            }
        }
        if !connected {
            break;
        }
    }
    GraphMetrics {
        rooms: g.rooms().len(),
        leaf_rooms,
        assets: g.asset_count(),
        edges: g.edges().len(),
        diameter: if connected { diameter as i64 } else { -1 },
        connected,
        difficulty: g.difficulty(),
    }
}

/// Degree of every room id (inter-room edges only).
pub fn degrees(g: &SceneGraph) -> HashMap<&str, usize> {
    let mut deg: HashMap<&str, usize> = g.rooms().iter().map(|r| (r.id.as_str(), 0)).collect();
    for Edge(a, b) in g.edges() {
        *deg.get_mut(a.as_str()).expect("validated") += 1;
        *deg.get_mut(b.as_str()).expect("validated") += 1;
    }
    deg
}
