//! Serialized run results.
//!
//! The JSON payload is deterministic for a fixed `(config, seed)`: field
//! order follows the struct, and wall-clock time is kept out of the
//! serialized form (it is printed, not persisted).

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub rows: usize,
    pub features: usize,
    pub classes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub dataset: DatasetSummary,
    /// Ensemble accuracy on each held-out fold (the headline metric).
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// Accuracy of the single highest-joint tree per fold, for comparison.
    pub fold_accuracies_map_tree: Vec<f64>,
    pub mean_accuracy_map_tree: f64,
    pub fold_acceptance_rates: Vec<f64>,
    /// Per fold, per iteration.
    pub best_log_joint: Vec<Vec<f64>>,
    pub worst_log_joint: Vec<Vec<f64>>,
    /// Per fold, per iteration (initial vector first); populated only by the
    /// population sampler.
    pub pheromone_trajectory: Option<Vec<Vec<[f64; 4]>>>,
    /// Measured, not persisted; excluded from the determinism contract.
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

impl RunResult {
    pub fn to_json(&self) -> Result<String> {
        let mut out = serde_json::to_string_pretty(self)?;
        out.push('\n');
        Ok(out)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref())
            .with_context(|| format!("reading result file {}", path.as_ref().display()))?;
        Self::from_json(&text)
    }
}

/// Write the canonical JSON form of one result.
pub fn emit_results<P: AsRef<Path>>(result: &RunResult, path: P) -> Result<()> {
    let json = result.to_json()?;
    fs::write(path.as_ref(), json)
        .with_context(|| format!("writing result file {}", path.as_ref().display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{MissingValueMode, SamplerKind};

    fn sample_result() -> RunResult {
        RunResult {
            schema_version: SCHEMA_VERSION,
            config: ExperimentConfig {
                dataset: "data.csv".into(),
                label_column: "class".into(),
                has_headers: true,
                missing: MissingValueMode::Impute,
                sampler: SamplerKind::SmcEa,
                units: 10,
                iterations: 5,
                a: 1.0,
                beta: 2.0,
                max_depth: 15,
                burn_in_fraction: 0.2,
                folds: 5,
                seed: 42,
            },
            seed: 42,
            dataset: DatasetSummary {
                rows: 70,
                features: 206,
                classes: 7,
            },
            fold_accuracies: vec![0.9, 0.8, 1.0, 0.85, 0.95],
            mean_accuracy: 0.9,
            fold_accuracies_map_tree: vec![0.8; 5],
            mean_accuracy_map_tree: 0.8,
            fold_acceptance_rates: vec![0.5; 5],
            best_log_joint: vec![vec![-10.0, -9.0]; 5],
            worst_log_joint: vec![vec![-20.0, -15.0]; 5],
            pheromone_trajectory: Some(vec![vec![[0.25; 4], [0.3, 0.3, 0.2, 0.2]]; 5]),
            wall_clock_seconds: 1.25,
        }
    }

    #[test]
    fn json_round_trip_is_identity() {
        let result = sample_result();
        let json = result.to_json().unwrap();
        let parsed = RunResult::from_json(&json).unwrap();
        // wall clock is measurement metadata and deliberately not persisted
        assert_eq!(parsed.wall_clock_seconds, 0.0);
        assert_eq!(parsed.to_json().unwrap(), json);

        let mut without_clock = result.clone();
        without_clock.wall_clock_seconds = 0.0;
        assert_eq!(parsed, without_clock);
    }

    #[test]
    fn schema_version_is_a_top_level_field() {
        let json = sample_result().to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["schema_version"], SCHEMA_VERSION);
        assert!(value.get("wall_clock_seconds").is_none());
    }
}
