use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

use super::embed::{cosine, embed_text};
use super::{ModelBundle, ModelRecord};

/// Hard filters; every present field must hold for a record to be returned.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QueryFilter {
    pub color: Option<String>,
    pub tags: Vec<String>,
    /// Room category the record must have positive affinity for.
    pub room: Option<String>,
    /// Minimum affinity for `room`.
    pub min_affinity: f64,
    /// Footprint limit (w, d); the record may be turned by 90 degrees.
    pub max_footprint: Option<[f64; 2]>,
}

impl QueryFilter {
    pub fn is_empty(&self) -> bool {
        self.color.is_none() && self.tags.is_empty() && self.room.is_none() && self.max_footprint.is_none()
    }

    pub fn accepts(&self, r: &ModelRecord) -> bool {
        if let Some(c) = &self.color {
            if !r.has_color(c) {
                return false;
            }
        }
        if !self.tags.iter().all(|t| r.has_tag(t)) {
            return false;
        }
        if let Some(room) = &self.room {
            let a = r.affinity(room);
            if a <= 0.0 || a < self.min_affinity {
                return false;
            }
        }
        if let Some([w, d]) = self.max_footprint {
            let (lo, hi) = (w.min(d), w.max(d));
            let (a, b) = r.footprint_dims();
            if a > lo + 1e-9 || b > hi + 1e-9 {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("query needs text or at least one filter")]
    EmptyQuery,
    #[error("k must be at least 1")]
    ZeroK,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredRecord<'a> {
    pub record: &'a ModelRecord,
    pub score: f64,
}

fn rank(a: &(f64, &str), b: &(f64, &str)) -> Ordering {
    b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1))
}

/// Top `k` records passing `filter`, by cosine similarity to `text`, ties by
/// ascending id. An empty result is not an error.
pub fn query<'a>(
    bundle: &'a ModelBundle,
    text: &str,
    filter: &QueryFilter,
    k: usize,
) -> Result<Vec<ScoredRecord<'a>>, QueryError> {
    if k == 0 {
        return Err(QueryError::ZeroK);
    }
    if text.trim().is_empty() && filter.is_empty() {
        return Err(QueryError::EmptyQuery);
    }
    let q = embed_text(text);
    let mut scored: Vec<(f64, &str, usize)> = bundle
        .records()
        .iter()
        .zip(bundle.vectors())
        .enumerate()
        .filter(|(_, (r, _))| filter.accepts(r))
        .map(|(i, (r, v))| (cosine(&q, v), r.id.as_str(), i))
        .collect();
    let cmp = |a: &(f64, &str, usize), b: &(f64, &str, usize)| rank(&(a.0, a.1), &(b.0, b.1));
    if scored.len() > k {
        scored.select_nth_unstable_by(k - 1, cmp);
        scored.truncate(k);
    }
    scored.sort_by(cmp);
    Ok(scored.into_iter().map(|(score, _, i)| ScoredRecord { record: &bundle.records()[i], score }).collect())
}
