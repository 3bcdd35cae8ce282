//! Experiment configuration: one dataset, one sampler, one grid cell.

use std::path::PathBuf;

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};
use treemc::data::MissingPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Mcmc,
    SmcEa,
}

impl std::fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SamplerKind::Mcmc => write!(f, "mcmc"),
            SamplerKind::SmcEa => write!(f, "smc-ea"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MissingValueMode {
    Drop,
    Impute,
}

impl From<MissingValueMode> for MissingPolicy {
    fn from(mode: MissingValueMode) -> Self {
        match mode {
            MissingValueMode::Drop => MissingPolicy::Drop,
            MissingValueMode::Impute => MissingPolicy::MedianImpute,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: PathBuf,
    pub label_column: String,
    pub has_headers: bool,
    pub missing: MissingValueMode,
    pub sampler: SamplerKind,
    /// Chains for MCMC, particles for SMC-EA.
    pub units: usize,
    pub iterations: usize,
    pub a: f64,
    pub beta: f64,
    pub max_depth: usize,
    pub burn_in_fraction: f64,
    pub folds: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.units == 0 {
            bail!("units must be at least 1");
        }
        if self.iterations == 0 {
            bail!("iterations must be at least 1");
        }
        if self.max_depth == 0 {
            bail!("max-depth must be at least 1");
        }
        if self.folds < 2 {
            bail!("folds must be at least 2");
        }
        if !(0.0..1.0).contains(&self.burn_in_fraction) {
            bail!("burn-in fraction must lie in [0, 1)");
        }
        if self.a <= 0.0 {
            bail!("a must be positive");
        }
        if self.beta < 0.0 {
            bail!("beta must be nonnegative");
        }
        Ok(())
    }
}
