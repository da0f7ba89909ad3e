//! Text prompt front-end: turns a generation prompt into a [`GenerationSpec`]
//! and maps difficulty levels to concrete generation targets.
//!
//! The rule-based [`RulePromptParser`] recognizes a small pattern set. Other
//! backends plug in through [`PromptInterpreter`].

use regex::Regex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::OnceLock;
use thiserror::Error;

use crate::config::Calibration;
use crate::graph::{SceneGraph, WorldContext};

#[derive(Debug, Error, PartialEq)]
pub enum PromptError {
    #[error("prompt contains no recognized generation request")]
    UnparseablePrompt,
    #[error("difficulty level must be >= 1, got {0}")]
    InvalidLevel(u32),
    #[error("invalid generation spec: {0}")]
    InvalidSpec(String),
}

/// Explicit per-level targets that replace the calibrated ones.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rooms_target: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assets_per_room_target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pedestrians: Option<u32>,
}

/// Machine-readable generation request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationSpec {
    pub context: WorldContext,
    pub levels: Vec<u32>,
    pub worlds_per_level: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<u32, TargetOverride>,
}

impl Default for GenerationSpec {
    fn default() -> Self {
        Self {
            context: WorldContext::Generic,
            levels: (1..=5).collect(),
            worlds_per_level: 1,
            seed: 0,
            overrides: BTreeMap::new(),
        }
    }
}

impl GenerationSpec {
    pub fn validate(&self) -> Result<(), PromptError> {
        if self.levels.is_empty() {
            return Err(PromptError::InvalidSpec("levels must be non-empty".into()));
        }
        if self.levels[0] < 1 {
            return Err(PromptError::InvalidLevel(self.levels[0]));
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PromptError::InvalidSpec("levels must be strictly increasing".into()));
        }
        if self.worlds_per_level < 1 {
            return Err(PromptError::InvalidSpec("worlds_per_level must be >= 1".into()));
        }
        Ok(())
    }

    pub fn world_count(&self) -> usize {
        self.levels.len() * self.worlds_per_level as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultyTargets {
    pub rooms_target: u32,
    pub assets_per_room_mean: f64,
    pub pedestrians: u32,
    pub extra_edge_fraction: f64,
}

/// Stage boundary between free text and a generation spec.
pub trait PromptInterpreter: Send + Sync {
    fn interpret(&self, text: &str) -> Result<GenerationSpec, PromptError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RulePromptParser {
    pub strict: bool,
}

impl PromptInterpreter for RulePromptParser {
    fn interpret(&self, text: &str) -> Result<GenerationSpec, PromptError> {
        parse_prompt(text, self.strict)
    }
}

struct Patterns {
    worlds: Regex,
    level_count: Regex,
    level_range: Regex,
    single_level: Regex,
    seed: Regex,
    hospital: Regex,
    residential: Regex,
    office: Regex,
}

fn patterns() -> &'static Patterns {
    static P: OnceLock<Patterns> = OnceLock::new();
    P.get_or_init(|| {
        let num = r"(\d+|one|two|three|four|five|six|seven|eight|nine|ten|eleven|twelve)";
        let re = |s: &str| Regex::new(&s.replace("NUM", num)).expect("static pattern");
        Patterns {
            worlds: re(r"\bNUM\s+(?:[a-z-]+\s+){0,2}?(?:worlds|environments|maps|scenes)\b"),
            level_count: re(r"\bNUM\s+(?:difficulty\s+|different\s+)?levels\b"),
            level_range: re(r"\blevels?\s+NUM\s*(?:-|to|through)\s*NUM\b"),
            single_level: re(r"\blevel\s+NUM\b"),
            seed: re(r"\bseed\s+(\d+)\b"),
            hospital: re(r"\b(?:hospitals?|clinics?|wards?|medical)\b"),
            residential: re(r"\b(?:residential|homes?|houses?|apartments?|flats?)\b"),
            office: re(r"\b(?:offices?|workplaces?|corporate)\b"),
        }
    })
}

fn number(token: &str) -> Option<u32> {
    const WORDS: [&str; 12] =
        ["one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve"];
    token.parse().ok().or_else(|| WORDS.iter().position(|w| *w == token).map(|i| i as u32 + 1))
}

/// Parses a prompt such as `"generate me 5 difficulty levels of a hospital
/// environment"`. Matching is case-insensitive. Unrecognized fields take
/// defaults (1 world per level, levels 1..=5, generic context); in strict
/// mode a prompt with no recognized token is rejected.
pub fn parse_prompt(text: &str, strict: bool) -> Result<GenerationSpec, PromptError> {
    let lower = text.to_lowercase();
    let p = patterns();
    let mut spec = GenerationSpec::default();
    let mut recognized = false;

    if let Some(n) = p.worlds.captures(&lower).and_then(|c| number(&c[1])) {
        if n >= 1 {
            spec.worlds_per_level = n;
            recognized = true;
        }
    }
    if let Some(c) = p.level_range.captures(&lower) {
        if let (Some(a), Some(b)) = (number(&c[1]), number(&c[2])) {
            if a >= 1 && a <= b {
                spec.levels = (a..=b).collect();
                recognized = true;
            }
        }
    } else if let Some(n) = p.level_count.captures(&lower).and_then(|c| number(&c[1])) {
        if n >= 1 {
            spec.levels = (1..=n).collect();
            recognized = true;
        }
    } else if let Some(n) = p.single_level.captures(&lower).and_then(|c| number(&c[1])) {
        if n >= 1 {
            spec.levels = vec![n];
            recognized = true;
        }
    }
    if let Some(seed) = p.seed.captures(&lower).and_then(|c| c[1].parse().ok()) {
        spec.seed = seed;
        recognized = true;
    }
    // First mention wins when several contexts appear.
    let ctx = [
        (WorldContext::Hospital, &p.hospital),
        (WorldContext::Residential, &p.residential),
        (WorldContext::Office, &p.office),
    ]
    .into_iter()
    .filter_map(|(ctx, re)| re.find(&lower).map(|m| (m.start(), ctx)))
    .min_by_key(|(pos, _)| *pos);
    if let Some((_, ctx)) = ctx {
        spec.context = ctx;
        recognized = true;
    }

    if strict && !recognized {
        return Err(PromptError::UnparseablePrompt);
    }
    Ok(spec)
}

/// Calibrated targets for one difficulty level.
pub fn difficulty_targets(
    cal: &Calibration,
    context: WorldContext,
    level: u32,
) -> Result<DifficultyTargets, PromptError> {
    if level < 1 {
        return Err(PromptError::InvalidLevel(level));
    }
    let l = level as f64;
    let peds = (cal.pedestrians_per_level * l * cal.pedestrian_weight(context) - 1e-9).ceil();
    Ok(DifficultyTargets {
        rooms_target: ((cal.rooms_per_level * l).round() as u32).max(1),
        assets_per_room_mean: cal.assets_base + cal.assets_slope * l,
        pedestrians: peds.max(0.0) as u32,
        extra_edge_fraction: cal.extra_edge_fraction,
    })
}

/// Targets for `level` with any explicit overrides from the spec applied.
pub fn targets_for(cal: &Calibration, spec: &GenerationSpec, level: u32) -> Result<DifficultyTargets, PromptError> {
    let mut t = difficulty_targets(cal, spec.context, level)?;
    if let Some(o) = spec.overrides.get(&level) {
        if let Some(r) = o.rooms_target {
            t.rooms_target = r.max(1);
        }
        if let Some(a) = o.assets_per_room_target {
            t.assets_per_room_mean = a.max(0.0);
        }
        if let Some(p) = o.pedestrians {
            t.pedestrians = p;
        }
    }
    Ok(t)
}

/// Heuristic inverse of the room axis of [`difficulty_targets`].
pub fn estimate_difficulty(cal: &Calibration, g: &SceneGraph) -> u32 {
    estimate_from_rooms(cal, g.rooms().len())
}

pub fn estimate_from_rooms(cal: &Calibration, rooms: usize) -> u32 {
    ((rooms as f64 / cal.rooms_per_level).round() as u32).max(1)
}
