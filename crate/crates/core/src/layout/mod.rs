//! Scene-graph synthesis and its realization as a floor plan.

pub mod partition;
pub mod synth;
pub mod zones;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

use crate::config::LayoutConfig;
use crate::geom::{round3, Point, Rect, Segment};
use crate::graph::{bfs_hops, AssetSpec, Edge, SceneGraph, ValidationError, WorldContext};
use partition::{outer_walls, place, shape_fronts, shared_wall, Axis, IRect, RootedTree, SharedWall};

pub use synth::{diameter_bound, room_id, synthesize_graph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LayoutError {
    #[error("layout failure: {0}")]
    Failure(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomShape {
    pub id: String,
    pub category: String,
    /// Counter-clockwise rectilinear outline in meters.
    pub polygon: Vec<Point>,
    pub assets: Vec<AssetSpec>,
}

impl RoomShape {
    pub fn rect(&self) -> Rect {
        Rect::bounding(&self.polygon).expect("room polygon has vertices")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoorKind {
    InterRoom,
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Doorway {
    pub segment: Segment,
    pub width: f64,
    pub kind: DoorKind,
    /// Two ids for inter-room doorways (sorted), one for external ones.
    pub rooms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetZone {
    pub id: String,
    pub room_id: String,
    /// Counter-clockwise rectangle in meters.
    pub polygon: Vec<Point>,
    /// Index into the room's asset list.
    pub asset_index: usize,
}

impl AssetZone {
    pub fn rect(&self) -> Rect {
        Rect::bounding(&self.polygon).expect("zone polygon has vertices")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnzonedAsset {
    pub room_id: String,
    pub asset_index: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LayoutReport {
    /// Attempts used, counting the accepted one.
    pub attempts: u32,
    /// Requested inter-room edges whose rooms ended up without a usable shared wall.
    pub dropped_edges: Vec<Edge>,
    /// Rooms whose requested external doorway found no outer wall.
    pub dropped_external: Vec<String>,
    /// Assets that did not get a zone.
    pub unzoned: Vec<UnzonedAsset>,
    /// The smallest feasible layout exceeded the area budget.
    pub area_overflow: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloorPlan {
    pub resolution: f64,
    pub wall_thickness: f64,
    pub context: WorldContext,
    pub difficulty: u32,
    pub bounds: Rect,
    pub rooms: Vec<RoomShape>,
    pub doorways: Vec<Doorway>,
    pub zones: Vec<AssetZone>,
    pub report: LayoutReport,
}

impl FloorPlan {
    pub fn room(&self, id: &str) -> Option<&RoomShape> {
        self.rooms.iter().find(|r| r.id == id)
    }

    pub fn doorways_of<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Doorway> + 'a {
        self.doorways.iter().filter(move |d| d.rooms.iter().any(|r| r == id))
    }

    pub fn zones_of<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a AssetZone> + 'a {
        self.zones.iter().filter(move |z| z.room_id == id)
    }
}

/// Rectangle swept by a door leaf opening into `room`: the doorway segment
/// extruded `depth` meters toward the room interior.
pub fn door_swing(door: &Segment, room: &Rect, depth: f64) -> Rect {
    let (a, b) = (door.a, door.b);
    if (a.x - b.x).abs() < 1e-9 {
        let (y0, y1) = (a.y.min(b.y), a.y.max(b.y));
        if (room.min.x - a.x).abs() < 1e-6 {
            Rect::new(Point::new(a.x, y0), Point::new(a.x + depth, y1))
        } else {
            Rect::new(Point::new(a.x - depth, y0), Point::new(a.x, y1))
        }
    } else {
        let (x0, x1) = (a.x.min(b.x), a.x.max(b.x));
        if (room.min.y - a.y).abs() < 1e-6 {
            Rect::new(Point::new(x0, a.y), Point::new(x1, a.y + depth))
        } else {
            Rect::new(Point::new(x0, a.y - depth), Point::new(x1, a.y))
        }
    }
}

/// Graph actually realized by the geometry: rooms with their assets, an edge
/// per inter-room doorway and the external doorways.
pub fn realized_graph(fp: &FloorPlan) -> Result<SceneGraph, ValidationError> {
    let rooms = fp
        .rooms
        .iter()
        .map(|r| crate::graph::RoomNode::new(r.id.clone(), r.category.clone(), r.assets.clone()))
        .collect();
    let mut edges = BTreeSet::new();
    let mut external = Vec::new();
    for d in &fp.doorways {
        match d.kind {
            DoorKind::InterRoom => {
                edges.insert(Edge::new(d.rooms[0].clone(), d.rooms[1].clone()));
            }
            DoorKind::External => external.push(d.rooms[0].clone()),
        }
    }
    SceneGraph::new(fp.context, fp.difficulty, rooms, edges, external)
}

pub fn floorplan_to_json(fp: &FloorPlan) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(fp).expect("floor plan serializes");
    out.push(b'\n');
    out
}

pub fn floorplan_from_json(bytes: &[u8]) -> Result<FloorPlan, serde_json::Error> {
    serde_json::from_slice(bytes)
}

struct Grid {
    res: f64,
    min_side: i64,
    door: i64,
    /// Shortest shared wall that can host a doorway clear of the corners.
    door_span: i64,
    wall: i64,
    depth: i64,
    clearance: i64,
    margin: f64,
}

impl Grid {
    fn new(cfg: &LayoutConfig) -> Self {
        let cells = |m: f64| (m / cfg.resolution - 1e-9).ceil() as i64;
        let door = (cfg.door_width / cfg.resolution).round() as i64;
        Self {
            res: cfg.resolution,
            min_side: cells(cfg.min_room_side),
            door,
            door_span: door + 2 * cells(cfg.wall_thickness),
            wall: cells(cfg.wall_thickness),
            depth: cells(cfg.door_swing_depth),
            clearance: cells(cfg.zone_clearance),
            margin: cfg.zone_margin,
        }
    }

    fn m(&self, c: i64) -> f64 {
        round3(c as f64 * self.res)
    }

    fn pt(&self, x: i64, y: i64) -> Point {
        Point::new(self.m(x), self.m(y))
    }

    fn rect(&self, r: &IRect) -> Rect {
        Rect::new(self.pt(r.x0, r.y0), self.pt(r.x1, r.y1))
    }

    fn cells_up(&self, m: f64) -> i64 {
        (m / self.res - 1e-9).ceil() as i64
    }
}

/// Door interval on a wall, kept one wall thickness away from the corner so
/// its swing leaves the rest of the room in one piece.
#[derive(Debug, Clone, Copy)]
struct GridDoor {
    wall: SharedWall,
    lo: i64,
    hi: i64,
}

struct Attempt {
    rects: Vec<IRect>,
    bounds: IRect,
    realized: Vec<(usize, usize)>,
    dropped: Vec<(usize, usize)>,
    external: Vec<(usize, Option<GridDoor>)>,
    overflow: bool,
    primary_ok: bool,
}

impl Attempt {
    fn doors(&self) -> usize {
        self.realized.len() + self.external.iter().filter(|(_, d)| d.is_some()).count()
    }

    fn score(&self) -> (bool, bool, usize) {
        (self.primary_ok, !self.overflow, self.doors())
    }
}

/// Realizes a connected scene graph as a floor plan.
///
/// Rooms come from a tree-guided guillotine partition of a bounding rectangle
/// whose area is drawn around `area_per_room * rooms`. A minimum-diameter
/// spanning tree is always realized; other edges get a doorway only when their
/// rooms end up sharing a wall long enough for one. Up to `max_restarts`
/// layouts are drawn and the one realizing the most doorways is kept.
pub fn synthesize_floorplan<R: Rng + ?Sized>(
    g: &SceneGraph,
    cfg: &LayoutConfig,
    rng: &mut R,
) -> Result<FloorPlan, LayoutError> {
    let n = g.rooms().len();
    if n == 0 {
        return Err(LayoutError::Failure("graph has no rooms".into()));
    }
    let adj = g.adjacency();
    if bfs_hops(&adj, 0).iter().any(Option::is_none) {
        return Err(LayoutError::Failure("graph is disconnected; no spanning tree to realize".into()));
    }
    let grid = Grid::new(cfg);
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| {
            let a = g.room_index(&e.0).expect("validated endpoint");
            let b = g.room_index(&e.1).expect("validated endpoint");
            (a.min(b), a.max(b))
        })
        .collect();
    let edge_set: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let linked = |a: usize, b: usize| edge_set.contains(&(a.min(b), a.max(b)));
    let external: Vec<usize> =
        g.external_doorways().iter().map(|id| g.room_index(id).expect("validated doorway room")).collect();
    let primary = external[0];
    let target = external.len() + edges.len();

    let mut best: Option<Attempt> = None;
    let mut attempts = 0;
    let max_attempts = cfg.max_restarts.max(1);
    for i in 0..max_attempts {
        attempts += 1;
        let tree_adj = min_diameter_tree(&adj, rng);
        // Rooting at the primary exterior room or next to it puts that room
        // on the outline by construction; other roots often pack tighter.
        let has_primary = best.as_ref().is_some_and(|b: &Attempt| b.primary_ok);
        let root = if i % 2 == 1 || (i + 1 == max_attempts && !has_primary) {
            let mut roots = vec![primary];
            roots.extend(tree_adj[primary].iter().copied());
            *roots.choose(rng).expect("non-empty")
        } else {
            rng.random_range(0..n)
        };
        let tree = RootedTree::from_adjacency(&tree_adj, root);
        let fronts = shape_fronts(&tree, grid.min_side);

        let area_cells = |m2: f64| m2 / (grid.res * grid.res);
        let tol = cfg.area_tolerance;
        let nominal = cfg.area_per_room * n as f64;
        let drawn = area_cells(nominal * rng.random_range((1.0 - 0.9 * tol)..=(1.0 + 0.9 * tol)));
        let a_max = area_cells(nominal * (1.0 + tol)).floor() as i64;
        let fitting: Vec<_> = fronts[root].iter().filter(|s| s.su * s.sv <= a_max).collect();
        let (shape, overflow) = match fitting.choose(rng) {
            Some(s) => (*s, false),
            None => (fronts[root].iter().min_by_key(|s| s.su * s.sv).expect("non-empty front"), true),
        };
        let area = (drawn.round() as i64).clamp(shape.su * shape.sv, a_max.max(shape.su * shape.sv));
        let w = ((area as f64).sqrt().round() as i64).clamp(shape.su, (area / shape.sv).max(shape.su));
        let h = (area / w).max(shape.sv);
        let axis = if rng.random_bool(0.5) { Axis::X } else { Axis::Y };
        let bounds = match axis {
            Axis::X => IRect::new(0, 0, w, h),
            Axis::Y => IRect::new(0, 0, h, w),
        };
        let mut rects = vec![IRect::default(); n];
        place(&tree, &fronts, root, bounds, axis, grid.min_side, &linked, rng, &mut rects);

        let (mut realized, mut dropped) = (Vec::new(), Vec::new());
        for &(a, b) in &edges {
            match shared_wall(&rects[a], &rects[b]) {
                Some(w) if w.len() >= grid.door_span => realized.push((a, b)),
                _ => dropped.push((a, b)),
            }
        }
        let ext = external_doors(&external, &rects, &bounds, &grid, rng);
        let primary_ok = ext.iter().any(|(r, d)| *r == primary && d.is_some());
        let attempt = Attempt { rects, bounds, realized, dropped, external: ext, overflow, primary_ok };
        let score = attempt.score();
        if best.as_ref().is_none_or(|b| score > b.score()) {
            best = Some(attempt);
        }
        if score == (true, true, target) {
            break;
        }
    }
    let best = best.expect("at least one attempt");
    if !best.primary_ok {
        return Err(LayoutError::Failure("primary external doorway not realizable".into()));
    }
    Ok(assemble(g, &grid, cfg, best, attempts))
}

fn external_doors<R: Rng + ?Sized>(
    external: &[usize],
    rects: &[IRect],
    bounds: &IRect,
    grid: &Grid,
    rng: &mut R,
) -> Vec<(usize, Option<GridDoor>)> {
    let mut per_room: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in external {
        *per_room.entry(r).or_default() += 1;
    }
    let mut out = Vec::new();
    for (&room, &count) in &per_room {
        let mut walls: Vec<SharedWall> =
            outer_walls(&rects[room], bounds).into_iter().filter(|w| w.len() >= grid.door_span).collect();
        walls.shuffle(rng);
        // Spread several doorways of one room over its outer walls, then
        // over equal slots of each wall.
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); walls.len()];
        for k in 0..count {
            if !walls.is_empty() {
                slots[k % walls.len()].push(k);
            }
        }
        let mut doors: Vec<Option<GridDoor>> = vec![None; count];
        for (wi, ks) in slots.iter().enumerate() {
            let wall = walls[wi];
            let m = ks.len() as i64;
            let slot = wall.len() / m.max(1);
            for (j, &k) in ks.iter().enumerate() {
                if slot >= grid.door_span {
                    let lo = wall.lo + j as i64 * slot + grid.wall;
                    doors[k] = Some(GridDoor { wall, lo, hi: lo + grid.door });
                }
            }
        }
        out.extend(doors.into_iter().map(|d| (room, d)));
    }
    out
}

fn assemble(g: &SceneGraph, grid: &Grid, cfg: &LayoutConfig, best: Attempt, attempts: u32) -> FloorPlan {
    let ids: Vec<&str> = g.rooms().iter().map(|r| r.id.as_str()).collect();
    let seg = |d: &GridDoor| {
        if d.wall.vertical {
            Segment::new(grid.pt(d.wall.at, d.lo), grid.pt(d.wall.at, d.hi))
        } else {
            Segment::new(grid.pt(d.lo, d.wall.at), grid.pt(d.hi, d.wall.at))
        }
    };
    let mut grid_doors: Vec<Vec<GridDoor>> = vec![Vec::new(); ids.len()];
    let mut doorways = Vec::new();
    for &(a, b) in &best.realized {
        let wall = shared_wall(&best.rects[a], &best.rects[b]).expect("realized edges share a wall");
        let lo = wall.lo + grid.wall;
        let d = GridDoor { wall, lo, hi: lo + grid.door };
        grid_doors[a].push(d);
        grid_doors[b].push(d);
        doorways.push(Doorway {
            segment: seg(&d),
            width: cfg.door_width,
            kind: DoorKind::InterRoom,
            rooms: vec![ids[a].to_string(), ids[b].to_string()],
        });
    }
    let mut dropped_external = Vec::new();
    for (room, d) in &best.external {
        match d {
            Some(d) => {
                grid_doors[*room].push(*d);
                doorways.push(Doorway {
                    segment: seg(d),
                    width: cfg.door_width,
                    kind: DoorKind::External,
                    rooms: vec![ids[*room].to_string()],
                });
            }
            None => dropped_external.push(ids[*room].to_string()),
        }
    }

    let mut rooms = Vec::with_capacity(ids.len());
    let mut zones = Vec::new();
    let mut unzoned = Vec::new();
    for (i, node) in g.rooms().iter().enumerate() {
        let r = best.rects[i];
        rooms.push(RoomShape {
            id: node.id.clone(),
            category: node.category.clone(),
            polygon: grid.rect(&r).corners(),
            assets: node.assets.clone(),
        });
        let blocked: Vec<IRect> = grid_doors[i].iter().map(|d| swing_cells(d, &r, grid.depth)).collect();
        let c = grid.clearance;
        let free = IRect::new(r.x0 + c, r.y0 + c, r.x1 - c, r.y1 - c);
        let sizes: Vec<(i64, i64)> = node
            .assets
            .iter()
            .map(|a| (grid.cells_up(a.size[0] + grid.margin), grid.cells_up(a.size[1] + grid.margin)))
            .collect();
        let (packed, unfit) = zones::pack_zones(free, &blocked, &sizes);
        for (k, zr) in packed {
            zones.push(AssetZone {
                id: format!("{}/z{k}", node.id),
                room_id: node.id.clone(),
                polygon: grid.rect(&zr).corners(),
                asset_index: k,
            });
        }
        unzoned.extend(unfit.into_iter().map(|k| UnzonedAsset { room_id: node.id.clone(), asset_index: k }));
    }
    let dropped_edges = best.dropped.iter().map(|&(a, b)| Edge::new(ids[a], ids[b])).collect();
    FloorPlan {
        resolution: cfg.resolution,
        wall_thickness: cfg.wall_thickness,
        context: g.context(),
        difficulty: g.difficulty(),
        bounds: grid.rect(&best.bounds),
        rooms,
        doorways,
        zones,
        report: LayoutReport { attempts, dropped_edges, dropped_external, unzoned, area_overflow: best.overflow },
    }
}

fn swing_cells(d: &GridDoor, room: &IRect, depth: i64) -> IRect {
    let at = d.wall.at;
    if d.wall.vertical {
        if room.x0 == at {
            IRect::new(at, d.lo, at + depth, d.hi)
        } else {
            IRect::new(at - depth, d.lo, at, d.hi)
        }
    } else if room.y0 == at {
        IRect::new(d.lo, at, d.hi, at + depth)
    } else {
        IRect::new(d.lo, at - depth, d.hi, at)
    }
}

/// Spanning tree of minimum diameter, as adjacency lists.
///
/// Breadth-first trees grown from every vertex and from both ends of every
/// edge include one rooted at the absolute center, which is optimal for
/// unit edge lengths. Ties are broken at random, and neighbor order is
/// shuffled so repeated calls explore different optimal trees.
pub fn min_diameter_tree<R: Rng + ?Sized>(adj: &[Vec<usize>], rng: &mut R) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut sources: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    for (u, nb) in adj.iter().enumerate() {
        for &v in nb {
            if u < v {
                sources.push(vec![u, v]);
            }
        }
    }
    let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
    let mut ties = 0u32;
    for src in sources {
        let tree = bfs_tree(adj, &src, rng);
        let d = tree_diameter(&tree);
        match &best {
            Some((bd, _)) if d > *bd => {}
            Some((bd, _)) if d == *bd => {
                ties += 1;
                if rng.random_range(0..=ties) == 0 {
                    best = Some((d, tree));
                }
            }
            _ => {
                ties = 0;
                best = Some((d, tree));
            }
        }
    }
    best.map(|b| b.1).unwrap_or_default()
}

fn bfs_tree<R: Rng + ?Sized>(adj: &[Vec<usize>], src: &[usize], rng: &mut R) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut tree = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in src {
        seen[s] = true;
        queue.push_back(s);
    }
    if let [a, b] = src {
        tree[*a].push(*b);
        tree[*b].push(*a);
    }
    while let Some(u) = queue.pop_front() {
        let mut nb = adj[u].clone();
        nb.shuffle(rng);
        for v in nb {
            if !seen[v] {
                seen[v] = true;
                tree[u].push(v);
                tree[v].push(u);
                queue.push_back(v);
            }
        }
    }
    tree
}

fn tree_diameter(tree: &[Vec<usize>]) -> usize {
    if tree.is_empty() {
        return 0;
    }
    let far = |s: usize| {
        bfs_hops(tree, s).into_iter().enumerate().filter_map(|(i, d)| d.map(|d| (d, i))).max().unwrap_or((0, s))
    };
    let (_, a) = far(0);
    far(a).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{compute_graph_metrics, RoomNode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(ids: &[&str], edges: &[(&str, &str)], ext: &[&str]) -> SceneGraph {
        SceneGraph::new(
            WorldContext::Generic,
            1,
            ids.iter().map(|i| RoomNode::new(*i, "room", vec![])).collect(),
            edges.iter().map(|(a, b)| Edge::new(*a, *b)),
            ext.iter().map(|s| s.to_string()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_room() {
        let g = graph(&["a"], &[], &["a"]);
        let fp = synthesize_floorplan(&g, &LayoutConfig::default(), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(fp.rooms.len(), 1);
        assert_eq!(fp.doorways.len(), 1);
        assert_eq!(fp.doorways[0].kind, DoorKind::External);
        let area = fp.bounds.area();
        assert!((7.2..=10.8).contains(&area), "{area}");
    }

    #[test]
    fn path_graph_realizes_every_edge() {
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")], &["a"]);
        for seed in 0..50 {
            let fp = synthesize_floorplan(&g, &LayoutConfig::default(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let rg = realized_graph(&fp).unwrap();
            assert_eq!(rg.edges(), g.edges());
        }
    }

    #[test]
    fn min_diameter_tree_of_cycle() {
        let n = 8;
        let adj: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect();
        let t = min_diameter_tree(&adj, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(t.iter().map(Vec::len).sum::<usize>(), 2 * (n - 1));
        assert_eq!(tree_diameter(&t), n - 1);
        // a star plus a chord keeps diameter 2
        let mut star = vec![vec![1, 2, 3, 4], vec![0, 2], vec![0, 1], vec![0], vec![0]];
        star[3].push(4);
        star[4].push(3);
        let t = min_diameter_tree(&star, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(tree_diameter(&t), 2);
    }

    #[test]
    fn door_swing_points_inward() {
        let room = Rect::from_xywh(0.0, 0.0, 3.0, 3.0);
        let d = Segment::new(Point::new(3.0, 1.0), Point::new(3.0, 1.9));
        let s = door_swing(&d, &room, 0.9);
        assert!(room.contains_rect(&s, 1e-9));
    }

    #[test]
    fn synthesized_worlds_are_connected_and_compact() {
        let cal = crate::config::Calibration::default();
        let cfg = LayoutConfig::default();
        for seed in 0..120u64 {
            let level = 1 + (seed % 8) as u32;
            let t = crate::prompt::difficulty_targets(&cal, WorldContext::Office, level).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = synthesize_graph(&t, WorldContext::Office, level, &mut rng);
            let fp = synthesize_floorplan(&g, &cfg, &mut rng).unwrap();
            let m = compute_graph_metrics(&realized_graph(&fp).unwrap());
            assert!(m.connected, "seed {seed}");
            if m.rooms >= 4 {
                assert!(m.diameter as usize <= diameter_bound(m.rooms), "seed {seed}");
            }
            let nominal = 9.0 * m.rooms as f64;
            let area = fp.bounds.area();
            assert!(fp.report.area_overflow || area >= 0.8 * nominal - 1e-6, "seed {seed}: {area}");
            assert!(fp.report.area_overflow || area <= 1.2 * nominal + 1e-6, "seed {seed}: {area}");
        }
    }
}
