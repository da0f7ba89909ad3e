//! Tree-guided guillotine partition on an integer grid.
//!
//! Every room of a rooted spanning tree gets a rectangle. An inner room is a
//! strip spanning the full length of its region; its child subtrees sit in
//! columns on one or both sides of the strip, so each child touches its
//! parent along at least the minimum room side. Strip axes alternate with
//! depth. Minimal region shapes are computed bottom-up as Pareto fronts so
//! that any region at least as large as a recorded shape can be filled.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

/// Rectangle in grid cells, half-open in spirit: `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IRect {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl IRect {
    pub fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> i64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> i64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> i64 {
        self.width() * self.height()
    }

    pub fn overlaps(&self, o: &IRect) -> bool {
        self.x0 < o.x1 && o.x0 < self.x1 && self.y0 < o.y1 && o.y0 < self.y1
    }
}

/// A shared wall between two touching rectangles, in grid cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharedWall {
    /// True for a wall at constant x.
    pub vertical: bool,
    /// The constant coordinate.
    pub at: i64,
    pub lo: i64,
    pub hi: i64,
}

impl SharedWall {
    pub fn len(&self) -> i64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

pub fn shared_wall(a: &IRect, b: &IRect) -> Option<SharedWall> {
    let span = |lo0: i64, hi0: i64, lo1: i64, hi1: i64| (lo0.max(lo1), hi0.min(hi1));
    if a.x1 == b.x0 || b.x1 == a.x0 {
        let at = if a.x1 == b.x0 { a.x1 } else { a.x0 };
        let (lo, hi) = span(a.y0, a.y1, b.y0, b.y1);
        if hi > lo {
            return Some(SharedWall { vertical: true, at, lo, hi });
        }
    }
    if a.y1 == b.y0 || b.y1 == a.y0 {
        let at = if a.y1 == b.y0 { a.y1 } else { a.y0 };
        let (lo, hi) = span(a.x0, a.x1, b.x0, b.x1);
        if hi > lo {
            return Some(SharedWall { vertical: false, at, lo, hi });
        }
    }
    None
}

/// Walls of `r` lying on the outline of `bounds`.
pub fn outer_walls(r: &IRect, bounds: &IRect) -> Vec<SharedWall> {
    let mut out = Vec::new();
    if r.x0 == bounds.x0 {
        out.push(SharedWall { vertical: true, at: r.x0, lo: r.y0, hi: r.y1 });
    }
    if r.y0 == bounds.y0 {
        out.push(SharedWall { vertical: false, at: r.y0, lo: r.x0, hi: r.x1 });
    }
    if r.x1 == bounds.x1 {
        out.push(SharedWall { vertical: true, at: r.x1, lo: r.y0, hi: r.y1 });
    }
    if r.y1 == bounds.y1 {
        out.push(SharedWall { vertical: false, at: r.y1, lo: r.x0, hi: r.x1 });
    }
    out
}

/// Rooted spanning tree over room indices.
#[derive(Debug, Clone)]
pub struct RootedTree {
    pub root: usize,
    pub children: Vec<Vec<usize>>,
    pub size: Vec<usize>,
}

impl RootedTree {
    /// Roots an undirected tree given as adjacency lists.
    pub fn from_adjacency(adj: &[Vec<usize>], root: usize) -> Self {
        let n = adj.len();
        let mut children = vec![Vec::new(); n];
        let mut order = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    children[u].push(v);
                    order.push(v);
                }
            }
            i += 1;
        }
        let mut size = vec![1usize; n];
        for &u in order.iter().rev() {
            for &c in &children[u] {
                size[u] += size[c];
            }
        }
        Self { root, children, size }
    }

    /// Nodes in parent-before-child order.
    fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.children.len());
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        out
    }
}

/// A feasible minimal region for a subtree, in the subtree's local frame:
/// `su` along its strip, `sv` across it.
#[derive(Debug, Clone)]
pub struct Shape {
    pub su: i64,
    pub sv: i64,
    /// Chosen (width, height) of every child option, in this node's frame.
    picks: Vec<(i64, i64)>,
    /// Child positions (indices into `children[node]`) on the low and high
    /// sides of the strip.
    low: Vec<usize>,
    high: Vec<usize>,
}

const MAX_SHAPES: usize = 16;
/// Fan-out up to which every split of the children over both sides is tried.
const EXHAUSTIVE_FANOUT: usize = 8;

/// Pareto fronts of feasible shapes for every node.
pub fn shape_fronts(tree: &RootedTree, min_side: i64) -> Vec<Vec<Shape>> {
    let n = tree.children.len();
    let mut fronts: Vec<Vec<Shape>> = vec![Vec::new(); n];
    for &u in tree.preorder().iter().rev() {
        fronts[u] = node_front(&tree.children[u], &fronts, min_side);
    }
    fronts
}

/// Narrowest option of a child (parent frame: width = child's sv, height =
/// child's su) whose height fits under `threshold`.
fn pick_child(front: &[Shape], threshold: i64) -> Option<(i64, i64)> {
    front.iter().filter(|s| s.su <= threshold).map(|s| (s.sv, s.su)).min()
}

/// One side of a strip: a row of child columns.
#[derive(Clone)]
struct Side {
    width: i64,
    height: i64,
    picks: Vec<(usize, (i64, i64))>,
}

/// Pareto-minimal rows for a set of children, one per height threshold.
fn side_front(members: &[usize], children: &[usize], fronts: &[Vec<Shape>]) -> Vec<Side> {
    if members.is_empty() {
        return vec![Side { width: 0, height: 0, picks: vec![] }];
    }
    let mut thresholds: Vec<i64> = members.iter().flat_map(|&i| fronts[children[i]].iter().map(|s| s.su)).collect();
    thresholds.sort_unstable();
    thresholds.dedup();
    let mut out: Vec<Side> = Vec::new();
    for th in thresholds {
        let picks: Option<Vec<(usize, (i64, i64))>> =
            members.iter().map(|&i| pick_child(&fronts[children[i]], th).map(|p| (i, p))).collect();
        let Some(picks) = picks else { continue };
        let width = picks.iter().map(|(_, p)| p.0).sum();
        let height = picks.iter().map(|(_, p)| p.1).max().unwrap_or(0);
        // thresholds ascend, so heights do too: keep strictly narrower rows
        if out.last().is_none_or(|l| width < l.width) {
            out.push(Side { width, height, picks });
        }
    }
    out
}

fn node_front(children: &[usize], fronts: &[Vec<Shape>], m: i64) -> Vec<Shape> {
    let k = children.len();
    if k == 0 {
        return vec![Shape { su: m, sv: m, picks: vec![], low: vec![], high: vec![] }];
    }
    let splits: Vec<(Vec<usize>, Vec<usize>)> = if k <= EXHAUSTIVE_FANOUT {
        // child 0 stays low; mirrored splits are drawn at placement time
        (0..1u32 << (k - 1))
            .map(|mask| {
                let (mut low, mut high) = (vec![0], Vec::new());
                for i in 1..k {
                    if mask >> (i - 1) & 1 == 1 {
                        high.push(i);
                    } else {
                        low.push(i);
                    }
                }
                (low, high)
            })
            .collect()
    } else {
        lpt_splits(children, fronts)
    };

    let mut cands = Vec::new();
    for (low, high) in splits {
        let lf = side_front(&low, children, fronts);
        let hf = side_front(&high, children, fronts);
        for l in &lf {
            for h in &hf {
                let mut picks = vec![(0, 0); k];
                for &(i, p) in l.picks.iter().chain(&h.picks) {
                    picks[i] = p;
                }
                cands.push(Shape {
                    su: l.width.max(h.width).max(m),
                    sv: l.height + m + h.height,
                    picks,
                    low: low.clone(),
                    high: high.clone(),
                });
            }
        }
    }
    pareto(cands)
}

/// For wide fan-outs: everything on one side, plus a longest-processing-time
/// split by narrowest width.
fn lpt_splits(children: &[usize], fronts: &[Vec<Shape>]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let narrow: Vec<i64> = children.iter().map(|&c| fronts[c].iter().map(|s| s.sv).min().unwrap_or(0)).collect();
    let mut idx: Vec<usize> = (0..children.len()).collect();
    idx.sort_by_key(|&i| std::cmp::Reverse(narrow[i]));
    let (mut low, mut high) = (Vec::new(), Vec::new());
    let (mut wl, mut wh) = (0i64, 0i64);
    for i in idx {
        if wl <= wh {
            wl += narrow[i];
            low.push(i);
        } else {
            wh += narrow[i];
            high.push(i);
        }
    }
    low.sort_unstable();
    high.sort_unstable();
    vec![((0..children.len()).collect(), Vec::new()), (low, high)]
}

fn pareto(mut cands: Vec<Shape>) -> Vec<Shape> {
    cands.sort_by_key(|s| (s.su, s.sv));
    let mut out: Vec<Shape> = Vec::new();
    for s in cands {
        if out.last().is_none_or(|l| s.sv < l.sv) {
            out.push(s);
        }
    }
    if out.len() > MAX_SHAPES {
        let step = (out.len() - 1) as f64 / (MAX_SHAPES - 1) as f64;
        out = (0..MAX_SHAPES).map(|i| out[(i as f64 * step).round() as usize].clone()).collect();
    }
    out
}

/// Strip direction of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    fn flip(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

// (u0, u1, v0, v1) in the frame where u runs along `axis`.
fn to_local(r: &IRect, axis: Axis) -> (i64, i64, i64, i64) {
    match axis {
        Axis::X => (r.x0, r.x1, r.y0, r.y1),
        Axis::Y => (r.y0, r.y1, r.x0, r.x1),
    }
}

fn to_global(u0: i64, u1: i64, v0: i64, v1: i64, axis: Axis) -> IRect {
    match axis {
        Axis::X => IRect::new(u0, v0, u1, v1),
        Axis::Y => IRect::new(v0, u0, v1, u1),
    }
}

/// Fills `rect` with the subtree of `node`. `linked(a, b)` reports whether two
/// rooms want a shared wall; siblings are ordered to keep linked rooms next to
/// each other.
pub fn place<R: Rng + ?Sized>(
    tree: &RootedTree,
    fronts: &[Vec<Shape>],
    node: usize,
    rect: IRect,
    axis: Axis,
    min_side: i64,
    linked: &dyn Fn(usize, usize) -> bool,
    rng: &mut R,
    out: &mut [IRect],
) {
    let (u0, u1, v0, v1) = to_local(&rect, axis);
    let (len_u, len_v) = (u1 - u0, v1 - v0);
    let children = &tree.children[node];
    if children.is_empty() {
        out[node] = rect;
        return;
    }
    let fitting: Vec<&Shape> = fronts[node].iter().filter(|s| s.su <= len_u && s.sv <= len_v).collect();
    let shape = (*fitting.choose(rng).expect("region was sized from this node's shape front")).clone();

    let picks = &shape.picks;
    let group_height = |g: &[usize]| g.iter().map(|&i| picks[i].1).max().unwrap_or(0);
    let group_rooms = |g: &[usize]| g.iter().map(|&i| tree.size[children[i]]).sum::<usize>();

    let (mut low, mut high) = (shape.low.clone(), shape.high.clone());
    if rng.random_bool(0.5) {
        std::mem::swap(&mut low, &mut high);
    }
    let (h_low, h_high) = (group_height(&low), group_height(&high));
    let slack_v = len_v - (h_low + min_side + h_high);
    debug_assert!(slack_v >= 0);

    // Strip thickness tracks this room's share of the subtree area.
    let share = len_v as f64 / tree.size[node] as f64 * rng.random_range(0.8..1.2);
    let thickness = (share.round() as i64).clamp(min_side, min_side + slack_v);
    let rest = slack_v - (thickness - min_side);
    let (r_low, r_high) = (group_rooms(&low) as f64, group_rooms(&high) as f64);
    let extra_low = if r_low + r_high > 0.0 { ((rest as f64) * r_low / (r_low + r_high)).round() as i64 } else { 0 };
    let band_low = if low.is_empty() { 0 } else { h_low + extra_low };
    let strip = to_global(u0, u1, v0 + band_low, v0 + band_low + thickness, axis);
    out[node] = strip;

    for (group, bv0, bv1) in [(low, v0, v0 + band_low), (high, v0 + band_low + thickness, v1)] {
        if group.is_empty() {
            continue;
        }
        let order = chain_order(&group, children, linked, rng);
        let base: i64 = order.iter().map(|&i| picks[i].0).sum();
        let slack_u = len_u - base;
        debug_assert!(slack_u >= 0);
        let weights: Vec<f64> =
            order.iter().map(|&i| tree.size[children[i]] as f64 * rng.random_range(0.85..1.15)).collect();
        let wsum: f64 = weights.iter().sum();
        let mut cursor = u0;
        let mut given = 0i64;
        for (k, &i) in order.iter().enumerate() {
            let extra = if k + 1 == order.len() {
                slack_u - given
            } else {
                ((slack_u as f64) * weights[k] / wsum).floor() as i64
            };
            given += extra;
            let w = picks[i].0 + extra;
            let child_rect = to_global(cursor, cursor + w, bv0, bv1, axis);
            cursor += w;
            place(tree, fronts, children[i], child_rect, axis.flip(), min_side, linked, rng, out);
        }
    }
}

/// Random start, then greedily append a sibling linked to the last one.
fn chain_order<R: Rng + ?Sized>(
    group: &[usize],
    children: &[usize],
    linked: &dyn Fn(usize, usize) -> bool,
    rng: &mut R,
) -> Vec<usize> {
    let mut rest: Vec<usize> = group.to_vec();
    rest.shuffle(rng);
    let mut order = Vec::with_capacity(rest.len());
    if let Some(first) = rest.pop() {
        order.push(first);
    }
    while !rest.is_empty() {
        let last = children[*order.last().expect("non-empty")];
        let pos = rest.iter().position(|&i| linked(last, children[i])).unwrap_or(rest.len() - 1);
        order.push(rest.remove(pos));
    }
    order
}
