use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sat::hulls_intersect;
use crate::geom::{point_in_convex, transform, Point, Rect};

/// Candidate spacing in meters.
pub const FIT_GRID: f64 = 0.05;

/// Collision tests the fallback search may spend on one zone.
pub const SEARCH_BUDGET: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub position: Point,
    /// Quarter turns counter-clockwise.
    pub quarter_turns: u8,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FitResult {
    /// One entry per input hull.
    pub fits: Vec<Option<Fit>>,
    pub unfit: Vec<usize>,
}

/// Greedy bottom-left fitting of hulls (given around their own origin) into a
/// convex zone. Candidate positions lie on a [`FIT_GRID`] lattice scanned by
/// `y` then `x`; each hull tries the four right-angle rotations in a shuffled
/// order and takes the first candidate inside the zone that overlaps neither
/// earlier hulls nor `obstacles`.
///
/// When the greedy pass leaves hulls unfit, a bounded backtracking search over
/// the same lattice looks for a placement of every hull; its result replaces
/// the greedy one only if it places them all.
pub fn fit_into_zone<R: Rng + ?Sized>(
    zone: &[Point],
    hulls: &[Vec<Point>],
    obstacles: &[Vec<Point>],
    rng: &mut R,
) -> FitResult {
    let mut res = FitResult::default();
    let Some(bb) = Rect::bounding(zone) else {
        res.fits = vec![None; hulls.len()];
        res.unfit = (0..hulls.len()).collect();
        return res;
    };
    let steps = |lo: f64, hi: f64| {
        let a = (lo / FIT_GRID - 1e-9).ceil() as i64;
        let b = (hi / FIT_GRID + 1e-9).floor() as i64;
        a..=b
    };
    let mut placed: Vec<Vec<Point>> = Vec::new();
    let mut orders = Vec::with_capacity(hulls.len());
    for (i, h) in hulls.iter().enumerate() {
        let mut turns = [0u8, 1, 2, 3];
        turns.shuffle(rng);
        orders.push(turns);
        let rotated: Vec<Vec<Point>> = turns.iter().map(|&t| transform(h, t, Point::default())).collect();
        let mut found = None;
        'scan: for ky in steps(bb.min.y, bb.max.y) {
            for kx in steps(bb.min.x, bb.max.x) {
                let pos = Point::new(kx as f64 * FIT_GRID, ky as f64 * FIT_GRID);
                for (j, r) in rotated.iter().enumerate() {
                    let world: Vec<Point> = r.iter().map(|p| *p + pos).collect();
                    if world.iter().all(|p| point_in_convex(zone, *p, 1e-9))
                        && !placed.iter().chain(obstacles).any(|o| hulls_intersect(o, &world))
                    {
                        found = Some((Fit { position: pos, quarter_turns: turns[j] }, world));
                        break 'scan;
                    }
                }
            }
        }
        match found {
            Some((f, world)) => {
                placed.push(world);
                res.fits.push(Some(f));
            }
            None => {
                res.fits.push(None);
                res.unfit.push(i);
            }
        }
    }
    if !res.unfit.is_empty() {
        if let Some(fits) = search(zone, &bb, hulls, obstacles, &orders) {
            res.fits = fits.into_iter().map(Some).collect();
            res.unfit.clear();
        }
    }
    res
}

struct Candidate {
    fit: Fit,
    world: Vec<Point>,
    bbox: Rect,
}

fn lattice(lo: f64, hi: f64) -> std::ops::RangeInclusive<i64> {
    ((lo / FIT_GRID - 1e-9).ceil() as i64)..=((hi / FIT_GRID + 1e-9).floor() as i64)
}

fn area(p: &[Point]) -> f64 {
    crate::geom::signed_area(p).abs()
}

/// Lattice placements of one hull inside the zone and clear of obstacles, in
/// scan order. Rotations producing the same shape are kept once.
fn candidates(zone: &[Point], bb: &Rect, h: &[Point], turns: &[u8; 4], obstacles: &[Vec<Point>]) -> Vec<Candidate> {
    let key = |p: &[Point]| {
        let mut k: Vec<(i64, i64)> =
            p.iter().map(|v| ((v.x * 1e7).round() as i64, (v.y * 1e7).round() as i64)).collect();
        k.sort_unstable();
        k
    };
    let mut shapes: Vec<(u8, Vec<Point>)> = Vec::new();
    for &t in turns {
        let r = transform(h, t, Point::default());
        if !shapes.iter().any(|(_, s)| key(s) == key(&r)) {
            shapes.push((t, r));
        }
    }
    let mut out = Vec::new();
    for ky in lattice(bb.min.y, bb.max.y) {
        for kx in lattice(bb.min.x, bb.max.x) {
            let pos = Point::new(kx as f64 * FIT_GRID, ky as f64 * FIT_GRID);
            for (t, s) in &shapes {
                let world: Vec<Point> = s.iter().map(|p| *p + pos).collect();
                if world.iter().all(|p| point_in_convex(zone, *p, 1e-9))
                    && !obstacles.iter().any(|o| hulls_intersect(o, &world))
                {
                    let bbox = Rect::bounding(&world).expect("non-empty hull");
                    out.push(Candidate { fit: Fit { position: pos, quarter_turns: *t }, world, bbox });
                }
            }
        }
    }
    out
}

fn boxes_overlap(a: &Rect, b: &Rect) -> bool {
    a.min.x < b.max.x - 1e-9 && b.min.x < a.max.x - 1e-9 && a.min.y < b.max.y - 1e-9 && b.min.y < a.max.y - 1e-9
}

/// Depth-first search, largest hull first. Identical hulls take candidates in
/// increasing order so permutations are not revisited.
fn search(
    zone: &[Point],
    bb: &Rect,
    hulls: &[Vec<Point>],
    obstacles: &[Vec<Point>],
    orders: &[[u8; 4]],
) -> Option<Vec<Fit>> {
    let mut order: Vec<usize> = (0..hulls.len()).collect();
    order.sort_by(|&a, &b| area(&hulls[b]).total_cmp(&area(&hulls[a])));
    if order.iter().map(|&i| area(&hulls[i])).sum::<f64>() > area(zone) + 1e-9 {
        return None;
    }
    let cands: Vec<Vec<Candidate>> =
        order.iter().map(|&i| candidates(zone, bb, &hulls[i], &orders[i], obstacles)).collect();
    let same: Vec<bool> = (0..order.len()).map(|k| k > 0 && hulls[order[k]] == hulls[order[k - 1]]).collect();

    struct State<'a> {
        cands: &'a [Vec<Candidate>],
        same: &'a [bool],
        chosen: Vec<usize>,
        budget: usize,
    }
    fn dfs(st: &mut State, k: usize) -> bool {
        if k == st.cands.len() {
            return true;
        }
        let start = if st.same[k] { st.chosen[k - 1] + 1 } else { 0 };
        for c in start..st.cands[k].len() {
            let cand = &st.cands[k][c];
            let mut clear = true;
            for (m, &o) in st.chosen.iter().enumerate() {
                let other = &st.cands[m][o];
                if boxes_overlap(&other.bbox, &cand.bbox) {
                    if st.budget == 0 {
                        return false;
                    }
                    st.budget -= 1;
                    if hulls_intersect(&other.world, &cand.world) {
                        clear = false;
                        break;
                    }
                }
            }
            if clear {
                st.chosen.push(c);
                if dfs(st, k + 1) {
                    return true;
                }
                st.chosen.pop();
            }
            if st.budget == 0 {
                return false;
            }
        }
        false
    }
    let mut st = State { cands: &cands, same: &same, chosen: Vec::new(), budget: SEARCH_BUDGET };
    if !dfs(&mut st, 0) {
        return None;
    }
    let mut fits = vec![None; hulls.len()];
    for (k, &c) in st.chosen.iter().enumerate() {
        fits[order[k]] = Some(cands[k][c].fit);
    }
    fits.into_iter().collect()
}
