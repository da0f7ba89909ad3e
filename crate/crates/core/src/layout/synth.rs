//! Scene-graph synthesis from difficulty targets.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use std::collections::BTreeSet;

use crate::catalog::{room_categories, templates_for_room};
use crate::graph::{bfs_hops, AssetSpec, Edge, RoomNode, SceneGraph, WorldContext};
use crate::prompt::DifficultyTargets;

const ROOT_MAX_CHILDREN: usize = 4;
const MAX_CHILDREN: usize = 3;
const TREE_ATTEMPTS: usize = 200;

pub fn room_id(i: usize) -> String {
    format!("r{i:02}")
}

/// Upper bound on the tree diameter accepted for `n` rooms.
pub fn diameter_bound(n: usize) -> usize {
    if n >= 4 {
        n.div_ceil(2)
    } else {
        n.saturating_sub(1)
    }
}

/// Builds a connected scene graph: jittered room count, context-specific room
/// categories, Poisson asset counts, a compact random spanning tree plus a
/// fraction of extra doorways, and one external doorway on a lowest-degree
/// room.
pub fn synthesize_graph<R: Rng + ?Sized>(
    targets: &DifficultyTargets,
    context: WorldContext,
    difficulty: u32,
    rng: &mut R,
) -> SceneGraph {
    let jitter: i64 = rng.random_range(-1..=1);
    let n = (targets.rooms_target as i64 + jitter).max(1) as usize;

    let categories = room_categories(context);
    let poisson = (targets.assets_per_room_mean > 0.0)
        .then(|| Poisson::new(targets.assets_per_room_mean).expect("positive mean"));
    let mut rooms = Vec::with_capacity(n);
    for i in 0..n {
        let category = categories.choose_weighted(rng, |(_, w)| *w).expect("non-empty category table").0;
        let count = poisson.as_ref().map_or(0, |p| p.sample(rng) as usize);
        let assets = (0..count).map(|_| draw_asset(category, rng)).collect();
        rooms.push(RoomNode::new(room_id(i), category, assets));
    }

    let parent = random_tree(n, rng);
    let mut adj = vec![Vec::new(); n];
    let mut edges = BTreeSet::new();
    for (child, p) in parent.iter().enumerate().skip(1) {
        adj[*p].push(child);
        adj[child].push(*p);
        edges.insert((*p, child));
    }

    // Extra doorways favor rooms two hops apart, which the floor plan can
    // usually place side by side.
    let extra = (targets.extra_edge_fraction * n as f64).floor() as usize;
    if extra > 0 {
        let mut candidates: Vec<((usize, usize), f64)> = Vec::new();
        for a in 0..n {
            let hops = bfs_hops(&adj, a);
            for (b, d) in hops.iter().enumerate().skip(a + 1) {
                if let Some(d) = d {
                    if *d >= 2 {
                        candidates.push(((a, b), if *d == 2 { 6.0 } else { 1.0 }));
                    }
                }
            }
        }
        let picked = candidates
            .choose_multiple_weighted(rng, extra.min(candidates.len()), |c| c.1)
            .map(|it| it.map(|c| c.0).collect::<Vec<_>>())
            .unwrap_or_default();
        for (a, b) in picked {
            adj[a].push(b);
            adj[b].push(a);
            edges.insert((a, b));
        }
    }

    let min_deg = adj.iter().map(Vec::len).min().unwrap_or(0);
    let leafmost: Vec<usize> = (0..n).filter(|&i| adj[i].len() == min_deg).collect();
    // Prefer a leaf hanging off the root: it always reaches the outer wall.
    let near_root: Vec<usize> = leafmost.iter().copied().filter(|&i| i != 0 && parent[i] == 0).collect();
    let ext = *if near_root.is_empty() { &leafmost } else { &near_root }.choose(rng).expect("at least one room");

    SceneGraph::new(
        context,
        difficulty,
        rooms,
        edges.into_iter().map(|(a, b)| Edge::new(room_id(a), room_id(b))),
        vec![room_id(ext)],
    )
    .expect("synthesized graph is valid by construction")
}

fn draw_asset<R: Rng + ?Sized>(category: &str, rng: &mut R) -> AssetSpec {
    let templates = templates_for_room(category);
    let (t, _) = templates.choose_weighted(rng, |(_, w)| *w).expect("every catalog room has templates");
    let mut colors: Vec<&str> = t.variants.iter().map(|(c, _)| *c).collect();
    colors.dedup();
    let color = colors.choose(rng).expect("template has variants");
    AssetSpec::new(t.name, t.size, *color)
}

/// Random recursive tree with bounded branching, resampled until its diameter
/// respects [`diameter_bound`]. Returns the parent of every node (node 0 is
/// the root and its own parent).
fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let bound = diameter_bound(n);
    for _ in 0..TREE_ATTEMPTS {
        let mut parent = vec![0usize; n];
        let mut children = vec![0usize; n];
        let mut ok = true;
        for i in 1..n {
            let open: Vec<usize> =
                (0..i).filter(|&j| children[j] < if j == 0 { ROOT_MAX_CHILDREN } else { MAX_CHILDREN }).collect();
            let Some(&p) = open.choose(rng) else {
                ok = false;
                break;
            };
            parent[i] = p;
            children[p] += 1;
        }
        if ok && tree_diameter(&parent) <= bound {
            return parent;
        }
    }
    // Breadth-first ternary tree: always within the bound.
    let mut parent = vec![0usize; n];
    for i in 1..n {
        parent[i] = (i - 1) / MAX_CHILDREN;
    }
    parent
}

fn tree_diameter(parent: &[usize]) -> usize {
    let n = parent.len();
    let mut adj = vec![Vec::new(); n];
    for (c, p) in parent.iter().enumerate().skip(1) {
        adj[*p].push(c);
        adj[c].push(*p);
    }
    let far = |s: usize| {
        bfs_hops(&adj, s)
            .into_iter()
            .enumerate()
            .max_by_key(|(_, d)| d.unwrap_or(0))
            .map(|(i, d)| (i, d.unwrap_or(0)))
            .unwrap_or((s, 0))
    };
    let (a, _) = far(0);
    far(a).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Calibration;
    use crate::graph::compute_graph_metrics;
    use crate::prompt::difficulty_targets;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn synth(level: u32, seed: u64) -> SceneGraph {
        let t = difficulty_targets(&Calibration::default(), WorldContext::Generic, level).unwrap();
        synthesize_graph(&t, WorldContext::Generic, level, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn level_one_seed_42() {
        let g = synth(1, 42);
        let m = compute_graph_metrics(&g);
        assert!(m.connected);
        assert!((2..=4).contains(&m.rooms));
    }

    #[test]
    fn spanning_tree_and_single_external_door() {
        for seed in 0..300 {
            let g = synth(1 + (seed % 8) as u32, seed);
            let m = compute_graph_metrics(&g);
            assert!(m.connected, "seed {seed}");
            assert!(m.edges + 1 >= m.rooms);
            assert_eq!(g.external_doorways().len(), 1);
            let deg = crate::graph::degrees(&g);
            let min = deg.values().min().copied().unwrap();
            assert_eq!(deg[g.external_doorways()[0].as_str()], min);
            if m.rooms >= 4 {
                assert!(m.diameter as usize <= diameter_bound(m.rooms), "seed {seed}");
            }
        }
    }

    #[test]
    fn level_eight_room_mean() {
        let mean = (0..100).map(|s| synth(8, s).rooms().len() as f64).sum::<f64>() / 100.0;
        assert!((23.0..=25.0).contains(&mean), "{mean}");
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(synth(5, 3), synth(5, 3));
    }
}
