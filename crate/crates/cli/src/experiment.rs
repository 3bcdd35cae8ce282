//! Cross-validated benchmark runs: load, split, sample, score.

use std::time::Instant;

use anyhow::{Context, Result};
use treemc::data::{kfold, load_csv, Dataset};
use treemc::mcmc::{run_chains, ChainConfig};
use treemc::model::predict_ensemble;
use treemc::rng::{mix_seed, DOMAIN_FOLD};
use treemc::smc::{run_smc_ea, SmcConfig};
use treemc::tree::Tree;

use crate::config::{ExperimentConfig, SamplerKind};
use crate::result::{DatasetSummary, RunResult, SCHEMA_VERSION};

struct FoldOutcome {
    accuracy: f64,
    accuracy_map_tree: f64,
    acceptance_rate: f64,
    best_log_joint: Vec<f64>,
    worst_log_joint: Vec<f64>,
    pheromones: Option<Vec<[f64; 4]>>,
}

struct SamplerOutput {
    /// Posterior draws with their log-joints, counts from the training fold.
    ensemble: Vec<(Tree, f64)>,
    acceptance_rate: f64,
    best_log_joint: Vec<f64>,
    worst_log_joint: Vec<f64>,
    pheromones: Option<Vec<[f64; 4]>>,
}

/// Run one sampler over every fold and aggregate accuracies.
///
/// Feature ranges used for proposals come from the training rows of each
/// fold only. Each fold gets its own derived seed, so fold results are
/// independent of how many folds run.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunResult> {
    config.validate()?;
    let started = Instant::now();

    let data = load_csv(
        &config.dataset,
        &config.label_column,
        config.missing.into(),
        config.has_headers,
    )
    .with_context(|| format!("loading dataset {}", config.dataset.display()))?;

    let plan =
        kfold(data.len(), config.folds, config.seed).context("building cross-validation folds")?;

    let mut outcomes = Vec::with_capacity(config.folds);
    for fold in 0..config.folds {
        let outcome = run_fold(
            config,
            &data,
            &plan.train_indices(fold),
            &plan.test_indices(fold),
            fold,
        )
        .with_context(|| format!("running fold {fold}"))?;
        outcomes.push(outcome);
    }

    let mean = |extract: fn(&FoldOutcome) -> f64| {
        outcomes.iter().map(extract).sum::<f64>() / outcomes.len() as f64
    };
    let result = RunResult {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        seed: config.seed,
        dataset: DatasetSummary {
            rows: data.len(),
            features: data.n_features(),
            classes: data.class_count(),
        },
        fold_accuracies: outcomes.iter().map(|o| o.accuracy).collect(),
        mean_accuracy: mean(|o| o.accuracy),
        fold_accuracies_map_tree: outcomes.iter().map(|o| o.accuracy_map_tree).collect(),
        mean_accuracy_map_tree: mean(|o| o.accuracy_map_tree),
        fold_acceptance_rates: outcomes.iter().map(|o| o.acceptance_rate).collect(),
        best_log_joint: outcomes.iter().map(|o| o.best_log_joint.clone()).collect(),
        worst_log_joint: outcomes.iter().map(|o| o.worst_log_joint.clone()).collect(),
        pheromone_trajectory: if config.sampler == SamplerKind::SmcEa {
            Some(
                outcomes
                    .iter()
                    .map(|o| o.pheromones.clone().unwrap())
                    .collect(),
            )
        } else {
            None
        },
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    Ok(result)
}

fn run_fold(
    config: &ExperimentConfig,
    data: &Dataset,
    train_idx: &[usize],
    test_idx: &[usize],
    fold: usize,
) -> Result<FoldOutcome> {
    let train = data.subset(train_idx)?;
    let fold_seed = mix_seed(config.seed, DOMAIN_FOLD, fold as u64);

    let output = match config.sampler {
        SamplerKind::Mcmc => {
            let chain_config = ChainConfig {
                iterations: config.iterations,
                chains: config.units,
                a: config.a,
                beta: config.beta,
                max_depth: config.max_depth,
                seed: fold_seed,
                burn_in_fraction: config.burn_in_fraction,
            };
            let run = run_chains(&chain_config, &train)?;
            SamplerOutput {
                ensemble: run
                    .pooled()
                    .map(|s| (s.tree.clone(), s.log_joint))
                    .collect(),
                acceptance_rate: run.acceptance_rate,
                best_log_joint: run.best_log_joint,
                worst_log_joint: run.worst_log_joint,
                pheromones: None,
            }
        }
        SamplerKind::SmcEa => {
            let smc_config = SmcConfig {
                particles: config.units,
                iterations: config.iterations,
                a: config.a,
                beta: config.beta,
                max_depth: config.max_depth,
                seed: fold_seed,
                ..SmcConfig::default()
            };
            let run = run_smc_ea(&smc_config, &train)?;
            SamplerOutput {
                ensemble: run
                    .population
                    .particles
                    .iter()
                    .map(|p| (p.tree.clone(), p.log_joint))
                    .collect(),
                acceptance_rate: run.acceptance_rate,
                best_log_joint: run.best_log_joint,
                worst_log_joint: run.worst_log_joint,
                pheromones: Some(run.pheromone_history),
            }
        }
    };

    let trees: Vec<&Tree> = output.ensemble.iter().map(|(t, _)| t).collect();
    let accuracy = accuracy_of(data, test_idx, trees.iter().copied())?;

    let map_tree = output
        .ensemble
        .iter()
        .max_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
        .map(|(t, _)| t)
        .expect("ensemble is never empty");
    let accuracy_map_tree = accuracy_of(data, test_idx, std::iter::once(map_tree))?;

    Ok(FoldOutcome {
        accuracy,
        accuracy_map_tree,
        acceptance_rate: output.acceptance_rate,
        best_log_joint: output.best_log_joint,
        worst_log_joint: output.worst_log_joint,
        pheromones: output.pheromones,
    })
}

fn accuracy_of<'a, I>(data: &Dataset, test_idx: &[usize], trees: I) -> Result<f64>
where
    I: IntoIterator<Item = &'a Tree> + Clone,
{
    let mut correct = 0usize;
    for &i in test_idx {
        let predicted = predict_ensemble(trees.clone(), data.row(i))?;
        if predicted == data.label(i) {
            correct += 1;
        }
    }
    Ok(correct as f64 / test_idx.len() as f64)
}
