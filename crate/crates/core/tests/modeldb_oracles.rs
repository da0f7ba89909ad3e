use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use scenegen_core::geom::orient;
use scenegen_core::modeldb::defaults::write_default_manifests;
use scenegen_core::modeldb::{build_bundle, build_from_manifests, convex_hull_2d, Manifest};
use scenegen_core::{query, ModelRecord, Point, QueryFilter};

/// Hull vertices by brute force: `(a, b)` is a hull edge when every other
/// point lies strictly left of it or on the closed segment.
fn brute_hull(pts: &[Point]) -> BTreeSet<(i64, i64)> {
    let key = |p: Point| ((p.x * 1e6).round() as i64, (p.y * 1e6).round() as i64);
    let mut out = BTreeSet::new();
    for (i, &a) in pts.iter().enumerate() {
        for (j, &b) in pts.iter().enumerate() {
            if i == j || a == b {
                continue;
            }
            let edge = pts.iter().all(|&c| {
                let o = orient(a, b, c);
                o > 0.0 || (o == 0.0 && (c - a).dot(b - a) >= 0.0 && (c - b).dot(a - b) >= 0.0)
            });
            if edge {
                out.insert(key(a));
                out.insert(key(b));
            }
        }
    }
    out
}

fn check_hull(pts: &[Point]) {
    let hull = convex_hull_2d(pts).unwrap();
    let key = |p: &Point| ((p.x * 1e6).round() as i64, (p.y * 1e6).round() as i64);
    let got: BTreeSet<_> = hull.iter().map(key).collect();
    assert_eq!(got.len(), hull.len());
    assert_eq!(got, brute_hull(pts));
    for k in 0..hull.len() {
        let (a, b, c) = (hull[k], hull[(k + 1) % hull.len()], hull[(k + 2) % hull.len()]);
        assert!(orient(a, b, c) > 0.0, "hull turns clockwise or is collinear at {b:?}");
    }
}

#[test]
fn hull_matches_brute_force_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..5 {
        let pts: Vec<Point> =
            (0..200).map(|_| Point::new(rng.random_range(-3.0..3.0), rng.random_range(-2.0..2.0))).collect();
        check_hull(&pts);
    }
}

#[test]
fn hull_matches_brute_force_on_lattice_points() {
    // many collinear and duplicate points
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for _ in 0..20 {
        let pts: Vec<Point> =
            (0..60).map(|_| Point::new(rng.random_range(0..6) as f64, rng.random_range(0..4) as f64)).collect();
        if convex_hull_2d(&pts).is_ok() {
            check_hull(&pts);
        }
    }
}

const WORDS: [&str; 16] = [
    "chair", "table", "wooden", "office", "bed", "hospital", "metal", "cabinet", "small", "large", "sofa", "lamp",
    "desk", "shelf", "trolley", "bench",
];
const COLORS: [&str; 5] = ["red", "blue", "grey", "white", "black"];
const ROOMS: [&str; 4] = ["kitchen", "office", "ward", "bedroom"];
const TAGS: [&str; 3] = ["obstacle", "human", "movable"];

fn fixture(rng: &mut ChaCha8Rng) -> Vec<(PathBuf, Manifest, Vec<u8>)> {
    (0..50)
        .map(|i| {
            let n = rng.random_range(2..6);
            let description = (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ");
            let (w, d) = (rng.random_range(0.3..2.0), rng.random_range(0.3..2.0));
            let mut room_affinity = BTreeMap::new();
            for r in ROOMS {
                if rng.random_bool(0.5) {
                    room_affinity.insert(r.to_string(), (rng.random_range(0..=10) as f64) / 10.0);
                }
            }
            let m = Manifest {
                id: format!("m{i:02}"),
                description,
                footprint_points: vec![[0.0, 0.0], [w, 0.0], [w, d], [0.0, d]],
                height: 1.0,
                color_materials: vec![(COLORS.choose(rng).unwrap().to_string(), "plastic".into())],
                room_affinity,
                tags: TAGS.iter().filter(|_| rng.random_bool(0.4)).map(|t| t.to_string()).collect(),
                payload: format!("m{i:02}.bin"),
            };
            (PathBuf::from(format!("m{i:02}.json")), m, vec![i as u8])
        })
        .collect()
}

/// Reference embedding: signed feature hashing into 256 dimensions with a
/// seeded FNV-1a.
fn oracle_embed(text: &str) -> Vec<f64> {
    let mut v = vec![0.0; 256];
    for tok in text.split(|c: char| !c.is_ascii_alphanumeric()).filter(|t| !t.is_empty()) {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ 0xfb1e_4a6f_272b_9a6c;
        for b in tok.to_ascii_lowercase().bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100_0000_01b3);
        }
        v[(h & 0xff) as usize] += if (h >> 8) & 1 == 1 { -1.0 } else { 1.0 };
    }
    v
}

fn oracle_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let (na, nb) = (a.iter().map(|x| x * x).sum::<f64>().sqrt(), b.iter().map(|x| x * x).sum::<f64>().sqrt());
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

fn oracle_accepts(f: &QueryFilter, r: &ModelRecord) -> bool {
    let colors: BTreeSet<&str> = r.color_materials.iter().map(|(c, _)| c.as_str()).collect();
    let room_ok = match &f.room {
        Some(room) => r.room_affinity.get(room).is_some_and(|&a| a > 0.0 && a >= f.min_affinity),
        None => true,
    };
    f.color.as_ref().is_none_or(|c| colors.contains(c.as_str())) && f.tags.iter().all(|t| r.tags.contains(t)) && room_ok
}

fn random_filter(rng: &mut ChaCha8Rng) -> QueryFilter {
    let room = rng.random_bool(0.5).then(|| ROOMS.choose(rng).unwrap().to_string());
    QueryFilter {
        color: rng.random_bool(0.5).then(|| COLORS.choose(rng).unwrap().to_string()),
        tags: TAGS.iter().filter(|_| rng.random_bool(0.25)).map(|t| t.to_string()).collect(),
        min_affinity: if room.is_some() { (rng.random_range(0..=6) as f64) / 10.0 } else { 0.0 },
        room,
        max_footprint: None,
    }
}

#[test]
fn query_matches_linear_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let db = build_from_manifests(fixture(&mut rng)).unwrap();
    let vecs: BTreeMap<&str, Vec<f64>> =
        db.records().iter().map(|r| (r.id.as_str(), oracle_embed(&r.description))).collect();
    for qi in 0..20 {
        let n = rng.random_range(1..4);
        let text = (0..n).map(|_| *WORDS.choose(&mut rng).unwrap()).collect::<Vec<_>>().join(" ");
        let filter = if qi % 2 == 0 { QueryFilter::default() } else { random_filter(&mut rng) };
        let k = rng.random_range(1..=12);
        let q = oracle_embed(&text);
        let mut want: Vec<(f64, &str)> = db
            .records()
            .iter()
            .filter(|r| oracle_accepts(&filter, r))
            .map(|r| (oracle_cosine(&q, &vecs[r.id.as_str()]), r.id.as_str()))
            .collect();
        want.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
        want.truncate(k);

        let got = query(&db, &text, &filter, k).unwrap();
        assert_eq!(got.len(), want.len(), "query {text:?}");
        for (g, (score, _)) in got.iter().zip(&want) {
            assert!((g.score - score).abs() < 1e-5, "query {text:?}: {} vs {score}", g.score);
            let own = oracle_cosine(&q, &vecs[g.record.id.as_str()]);
            assert!((g.score - own).abs() < 1e-5);
        }
        // away from near-ties the order is exactly the oracle's
        for w in 0..want.len() {
            let tied = |j: usize| (want[j].0 - want[w].0).abs() < 1e-5;
            if (w == 0 || !tied(w - 1)) && (w + 1 == want.len() || !tied(w + 1)) {
                assert_eq!(got[w].record.id, want[w].1);
            }
        }
    }
}

#[test]
fn filters_are_sound_and_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let db = build_from_manifests(fixture(&mut rng)).unwrap();
    for _ in 0..100 {
        let filter = random_filter(&mut rng);
        if filter.is_empty() {
            continue;
        }
        let eligible = db.records().iter().filter(|r| oracle_accepts(&filter, r)).count();
        let got = query(&db, "", &filter, 50).unwrap();
        assert_eq!(got.len(), eligible, "{filter:?}");
        assert!(got.iter().all(|h| oracle_accepts(&filter, h.record)));
        let ids: Vec<&str> = got.iter().map(|h| h.record.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        assert_eq!(ids, sorted, "zero-score ties are ordered by id");
    }
}

#[test]
fn bundle_build_is_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_default_manifests(a.path()).unwrap();
    write_default_manifests(b.path()).unwrap();
    let (x, y) = (build_bundle(a.path()).unwrap(), build_bundle(b.path()).unwrap());
    assert_eq!(x.to_bytes().unwrap(), y.to_bytes().unwrap());
    assert_eq!(x.digest().unwrap(), y.digest().unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let items = fixture(&mut rng);
    let mut reversed = items.clone();
    reversed.reverse();
    let (p, q) = (build_from_manifests(items).unwrap(), build_from_manifests(reversed).unwrap());
    assert_eq!(p.digest().unwrap(), q.digest().unwrap());
}
