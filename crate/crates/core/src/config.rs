//! Tunable constants for every generation stage, loadable from a TOML file.
//!
//! ```toml
//! [calibration]
//! rooms_per_level = 3.0
//! assets_base = 2.0
//! assets_slope = 0.5
//! extra_edge_fraction = 0.25
//! pedestrians_per_level = 1.5
//!
//! [layout]
//! door_width = 0.9
//!
//! [scenario.roles.hospital]
//! nurse = 0.3
//! patient = 0.4
//! visitor = 0.3
//! ```

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

use crate::graph::WorldContext;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parsing config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    pub calibration: Calibration,
    pub layout: LayoutConfig,
    pub scenario: ScenarioConfig,
}

impl GenConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, ConfigError> {
        let cfg: GenConfig = toml::from_str(s)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml_str(&text)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        let c = &self.calibration;
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if !(c.rooms_per_level > 0.0) {
            return bad("rooms_per_level must be positive");
        }
        if c.assets_base < 0.0 || c.assets_slope < 0.0 || c.pedestrians_per_level < 0.0 {
            return bad("asset and pedestrian rates must be non-negative");
        }
        if !(0.0..=0.5).contains(&c.extra_edge_fraction) {
            return bad("extra_edge_fraction must lie in [0, 0.5]");
        }
        let l = &self.layout;
        if l.min_room_side < l.door_width + 2.0 * l.wall_thickness {
            return bad("min_room_side must leave room for a doorway");
        }
        if !(l.resolution > 0.0) || !(l.area_per_room > 0.0) {
            return bad("resolution and area_per_room must be positive");
        }
        for (ctx, table) in &self.scenario.roles {
            if WorldContext::parse(ctx).is_none() {
                return Err(ConfigError::Invalid(format!("unknown context {ctx:?} in role table")));
            }
            if table.is_empty() || table.values().any(|w| *w < 0.0) || table.values().sum::<f64>() <= 0.0 {
                return Err(ConfigError::Invalid(format!("role table for {ctx} needs positive weights")));
            }
        }
        Ok(())
    }
}

/// Difficulty calibration: how a level maps to room, asset and pedestrian
/// targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Calibration {
    pub rooms_per_level: f64,
    pub assets_base: f64,
    pub assets_slope: f64,
    pub extra_edge_fraction: f64,
    pub pedestrians_per_level: f64,
    /// Multiplier on the pedestrian count per context.
    pub pedestrian_weights: BTreeMap<String, f64>,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            rooms_per_level: 3.0,
            assets_base: 2.0,
            assets_slope: 0.5,
            extra_edge_fraction: 0.25,
            pedestrians_per_level: 1.5,
            pedestrian_weights: [("generic", 1.0), ("hospital", 1.5), ("office", 1.25), ("residential", 0.75)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }
}

impl Calibration {
    pub fn pedestrian_weight(&self, ctx: WorldContext) -> f64 {
        self.pedestrian_weights.get(ctx.as_str()).copied().unwrap_or(1.0)
    }
}

/// Geometry constants for floor-plan synthesis, in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LayoutConfig {
    pub resolution: f64,
    pub area_per_room: f64,
    pub area_tolerance: f64,
    pub min_room_side: f64,
    pub door_width: f64,
    pub wall_thickness: f64,
    pub zone_clearance: f64,
    pub zone_margin: f64,
    pub door_swing_depth: f64,
    pub max_restarts: u32,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            resolution: 0.05,
            area_per_room: 9.0,
            area_tolerance: 0.2,
            min_room_side: 2.0,
            door_width: 0.9,
            wall_thickness: 0.15,
            zone_clearance: 0.1,
            zone_margin: 0.2,
            door_swing_depth: 0.9,
            max_restarts: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Role weights per context token.
    pub roles: BTreeMap<String, BTreeMap<String, f64>>,
    /// Weight of the `regular` behavior; the other five share the rest.
    pub regular_weight: f64,
    pub converse_probability: f64,
    pub attend_probability: f64,
    pub queue_probability: f64,
    pub clearance: f64,
    pub min_goals: usize,
    pub max_goals: usize,
    pub max_attempts: u32,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let table = |pairs: &[(&str, f64)]| -> BTreeMap<String, f64> {
            pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
        };
        let roles = [
            ("hospital", table(&[("nurse", 0.3), ("patient", 0.4), ("visitor", 0.3)])),
            ("office", table(&[("worker", 0.8), ("visitor", 0.2)])),
            ("residential", table(&[("resident", 0.8), ("visitor", 0.2)])),
            ("generic", table(&[("pedestrian", 1.0)])),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Self {
            roles,
            regular_weight: 0.6,
            converse_probability: 0.2,
            attend_probability: 0.15,
            queue_probability: 0.1,
            clearance: 0.3,
            min_goals: 2,
            max_goals: 4,
            max_attempts: 1000,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml_keeps_defaults() {
        let cfg = GenConfig::from_toml_str("[calibration]\nrooms_per_level = 2.5\n").unwrap();
        assert_eq!(cfg.calibration.rooms_per_level, 2.5);
        assert_eq!(cfg.calibration.assets_base, 2.0);
        assert_eq!(cfg.layout, LayoutConfig::default());
    }

    #[test]
    fn rejects_out_of_range_values() {
        assert!(GenConfig::from_toml_str("[calibration]\nextra_edge_fraction = 0.9\n").is_err());
        assert!(GenConfig::from_toml_str("[calibration]\nbogus = 1\n").is_err());
        assert!(GenConfig::from_toml_str("[scenario.roles.spaceship]\npilot = 1.0\n").is_err());
    }
}
