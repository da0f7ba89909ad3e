//! Per-world and per-corpus metrics, computed on realized graphs.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write;

use super::bundle::WorldBundle;
use crate::graph::compute_graph_metrics;

/// Metric columns in CSV order (after `world_id` and `level`).
pub const METRICS: [&str; 8] =
    ["rooms", "leaf_rooms", "assets", "edges", "diameter", "pedestrians", "no_match_count", "unfit_count"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub world_id: String,
    pub level: u32,
    pub rooms: usize,
    pub leaf_rooms: usize,
    pub assets: usize,
    /// Inter-room doorways.
    pub edges: usize,
    pub diameter: i64,
    pub pedestrians: usize,
    pub no_match_count: usize,
    pub unfit_count: usize,
}

impl MetricsRow {
    pub fn of(w: &WorldBundle) -> Self {
        let m = compute_graph_metrics(&w.realized);
        Self {
            world_id: w.id.clone(),
            level: w.provenance.level,
            rooms: m.rooms,
            leaf_rooms: m.leaf_rooms,
            assets: m.assets,
            edges: m.edges,
            diameter: m.diameter,
            pedestrians: w.scenario.agents.len(),
            no_match_count: w.population.no_match.len(),
            unfit_count: w.population.unfit.len(),
        }
    }

    pub fn value(&self, metric: &str) -> Option<f64> {
        Some(match metric {
            "rooms" => self.rooms as f64,
            "leaf_rooms" => self.leaf_rooms as f64,
            "assets" => self.assets as f64,
            "edges" | "doorways" => self.edges as f64,
            "diameter" => self.diameter as f64,
            "pedestrians" => self.pedestrians as f64,
            "no_match_count" => self.no_match_count as f64,
            "unfit_count" => self.unfit_count as f64,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
    /// Standard deviation over mean; NaN when the mean is zero.
    pub cv: f64,
}

impl Aggregate {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let variance = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let cv = if mean != 0.0 { variance.sqrt() / mean } else { f64::NAN };
        Self { mean, variance, cv }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelAggregate {
    pub level: u32,
    pub worlds: usize,
    pub metrics: BTreeMap<String, Aggregate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    /// Sorted by level, then world id.
    pub rows: Vec<MetricsRow>,
    /// One entry per distinct level, ascending.
    pub levels: Vec<LevelAggregate>,
    /// Pearson r of per-level means against level; NaN when undefined.
    pub linearity: BTreeMap<String, f64>,
}

/// Pearson correlation; NaN for fewer than two points or zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return f64::NAN;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return f64::NAN;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

impl MetricsReport {
    pub fn from_rows(mut rows: Vec<MetricsRow>) -> Self {
        rows.sort_by(|a, b| a.level.cmp(&b.level).then_with(|| a.world_id.cmp(&b.world_id)));
        let mut by_level: BTreeMap<u32, Vec<&MetricsRow>> = BTreeMap::new();
        for r in &rows {
            by_level.entry(r.level).or_default().push(r);
        }
        let levels: Vec<LevelAggregate> = by_level
            .iter()
            .map(|(&level, rs)| LevelAggregate {
                level,
                worlds: rs.len(),
                metrics: METRICS
                    .iter()
                    .map(|m| {
                        let xs: Vec<f64> = rs.iter().map(|r| r.value(m).expect("known metric")).collect();
                        (m.to_string(), Aggregate::of(&xs))
                    })
                    .collect(),
            })
            .collect();
        let lv: Vec<f64> = levels.iter().map(|l| l.level as f64).collect();
        let linearity = METRICS
            .iter()
            .map(|m| {
                let means: Vec<f64> = levels.iter().map(|l| l.metrics[*m].mean).collect();
                (m.to_string(), pearson(&lv, &means))
            })
            .collect();
        Self { rows, levels, linearity }
    }

    /// Per-level means of `metric`, ascending by level.
    pub fn means(&self, metric: &str) -> Vec<(u32, f64)> {
        let key = if metric == "doorways" { "edges" } else { metric };
        self.levels.iter().map(|l| (l.level, l.metrics[key].mean)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("world_id,level");
        for m in METRICS {
            s.push(',');
            s.push_str(m);
        }
        s.push('\n');
        for r in &self.rows {
            let _ = write!(s, "{},{}", r.world_id, r.level);
            for m in METRICS {
                let _ = write!(s, ",{}", r.value(m).expect("known metric"));
            }
            s.push('\n');
        }
        s.push_str("\n# summary\nlevel,metric,worlds,mean,variance,cv\n");
        for l in &self.levels {
            for (m, a) in &l.metrics {
                let _ = writeln!(s, "{},{m},{},{},{},{}", l.level, l.worlds, num(a.mean), num(a.variance), num(a.cv));
            }
        }
        s.push_str("\n# linearity\nmetric,pearson_r\n");
        for (m, r) in &self.linearity {
            let _ = writeln!(s, "{m},{}", num(*r));
        }
        s
    }
}

fn num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v}")
    }
}

pub fn evaluate_corpus(worlds: &[WorldBundle]) -> MetricsReport {
    MetricsReport::from_rows(worlds.iter().map(MetricsRow::of).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, level: u32, rooms: usize) -> MetricsRow {
        MetricsRow {
            world_id: id.into(),
            level,
            rooms,
            leaf_rooms: 1,
            assets: rooms * 2,
            edges: rooms - 1,
            diameter: 2,
            pedestrians: 0,
            no_match_count: 0,
            unfit_count: 0,
        }
    }

    #[test]
    fn single_world_has_nan_linearity() {
        let r = MetricsReport::from_rows(vec![row("a", 1, 4)]);
        assert_eq!(r.levels.len(), 1);
        assert_eq!(r.levels[0].metrics["rooms"].mean, 4.0);
        assert!(r.linearity["rooms"].is_nan());
        assert!(r.to_csv().contains("rooms,NaN\n"));
    }

    #[test]
    fn exact_linear_fixture() {
        let r = MetricsReport::from_rows(vec![row("c", 3, 9), row("a", 1, 3), row("b", 2, 6)]);
        assert!((r.linearity["rooms"] - 1.0).abs() < 1e-12);
        assert_eq!(r.rows.iter().map(|x| x.level).collect::<Vec<_>>(), vec![1, 2, 3]);
        let csv = r.to_csv();
        assert!(csv.starts_with(
            "world_id,level,rooms,leaf_rooms,assets,edges,diameter,pedestrians,no_match_count,unfit_count\na,1,3,"
        ));
    }

    #[test]
    fn aggregate_values() {
        let a = Aggregate::of(&[2.0, 4.0]);
        assert_eq!(a.mean, 3.0);
        assert_eq!(a.variance, 1.0);
        assert!((a.cv - 1.0 / 3.0).abs() < 1e-12);
    }
}
