//! Conventional multi-chain Metropolis-Hastings over trees.
//!
//! Each chain starts from a single-node tree and repeatedly proposes one of
//! the four moves, accepting with the standard ratio of joints times the
//! forward/reverse transition densities. Chains own disjoint RNG streams,
//! so they can run in parallel without changing any result.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::moves::{
    draw_kind, log_q_ratio, propose, renormalize, valid_moves, MoveKind, MoveRecord, KIND_COUNT,
};
use crate::rng::unit_rng;
use crate::tree::{populate_counts, Tree};

/// Uniform move-kind distribution; the plain-MCMC selection rule.
pub const UNIFORM_KINDS: [f64; KIND_COUNT] = [0.25; KIND_COUNT];

#[derive(Debug, Clone)]
pub struct ChainConfig {
    pub iterations: usize,
    pub chains: usize,
    pub a: f64,
    pub beta: f64,
    pub max_depth: usize,
    pub seed: u64,
    pub burn_in_fraction: f64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            iterations: 1000,
            chains: 10,
            a: 1.0,
            beta: 2.0,
            max_depth: 15,
            seed: 0,
            burn_in_fraction: 0.2,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        if self.chains == 0 {
            return Err(Error::InvalidConfig("chains must be at least 1".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidConfig("max_depth must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.burn_in_fraction) {
            return Err(Error::InvalidConfig(
                "burn_in_fraction must lie in [0, 1)".into(),
            ));
        }
        if self.a <= 0.0 || self.beta < 0.0 {
            return Err(Error::InvalidConfig(
                "prior constants need a > 0 and beta >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// One retained posterior draw.
#[derive(Debug, Clone)]
pub struct Sample {
    pub tree: Tree,
    pub log_joint: f64,
}

/// Everything one MH step produces.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub tree: Tree,
    pub log_joint: f64,
    pub accepted: bool,
    /// Capped acceptance probability `min(1, ratio)`.
    pub alpha: f64,
    pub record: MoveRecord,
}

/// Log of `min(1, ratio)` for a recorded proposal: joint log-ratio plus the
/// transition log-ratio. The depth-prior constant cancels algebraically, so
/// the result is bit-for-bit independent of `a`.
pub fn acceptance_log_ratio(
    model: &Model<'_>,
    current: &Tree,
    proposed: &Tree,
    record: &MoveRecord,
    reverse_probs: &[f64; KIND_COUNT],
    max_depth: usize,
) -> f64 {
    let delta_joint = model.log_likelihood(proposed) - model.log_likelihood(current)
        + model.log_param_prior(proposed)
        - model.log_param_prior(current)
        + model.log_tree_prior_ratio(current, proposed);
    let q = log_q_ratio(
        record,
        current,
        proposed,
        reverse_probs,
        model.space(),
        max_depth,
    );
    (delta_joint + q).min(0.0)
}

/// Propose with a pre-drawn kind, score it, and accept iff `alpha > u`.
///
/// This is the single accept/reject path shared by every sampler in the
/// crate; a one-particle population run and a one-chain MCMC run consume
/// identical RNG draws through it.
pub(crate) fn step_with_kind<R: Rng>(
    current: &Tree,
    model: &Model<'_>,
    base_probs: &[f64; KIND_COUNT],
    selection_probs: [f64; KIND_COUNT],
    kind: MoveKind,
    max_depth: usize,
    rng: &mut R,
) -> StepOutcome {
    let (proposed, record) = propose(
        current,
        kind,
        model.data(),
        model.space(),
        max_depth,
        selection_probs,
        rng,
    )
    .expect("kind was drawn from the valid subset");

    let log_alpha = match renormalize(base_probs, &valid_moves(&proposed, max_depth)) {
        Some(reverse_probs) => acceptance_log_ratio(
            model,
            current,
            &proposed,
            &record,
            &reverse_probs,
            max_depth,
        ),
        None => f64::NEG_INFINITY,
    };
    let alpha = log_alpha.exp();
    let u: f64 = rng.random();
    let accepted = alpha > u;
    let tree = if accepted { proposed } else { current.clone() };
    let log_joint = model.log_joint(&tree);
    StepOutcome {
        tree,
        log_joint,
        accepted,
        alpha,
        record,
    }
}

/// One Metropolis-Hastings step: draw a kind from `base_probs` renormalized
/// over the valid moves, propose, and accept or reject.
pub fn mh_step<R: Rng>(
    current: &Tree,
    model: &Model<'_>,
    base_probs: &[f64; KIND_COUNT],
    max_depth: usize,
    rng: &mut R,
) -> StepOutcome {
    let valid = valid_moves(current, max_depth);
    let selection_probs =
        renormalize(base_probs, &valid).expect("at least one move is valid for max_depth >= 1");
    let kind = draw_kind(&selection_probs, rng);
    step_with_kind(
        current,
        model,
        base_probs,
        selection_probs,
        kind,
        max_depth,
        rng,
    )
}

/// Result of a multi-chain run.
#[derive(Debug, Clone)]
pub struct McmcRun {
    /// Post-burn-in samples, one vector per chain, one sample per retained
    /// iteration.
    pub retained: Vec<Vec<Sample>>,
    /// Best/worst log-joint across chains at each iteration (burn-in
    /// included).
    pub best_log_joint: Vec<f64>,
    pub worst_log_joint: Vec<f64>,
    pub acceptance_rate: f64,
}

impl McmcRun {
    /// All retained samples pooled across chains, chain-major order.
    pub fn pooled(&self) -> impl Iterator<Item = &Sample> {
        self.retained.iter().flatten()
    }
}

struct ChainTrace {
    samples: Vec<Sample>,
    accepted: usize,
}

fn run_single_chain(model: &Model<'_>, config: &ChainConfig, mut rng: ChaCha8Rng) -> ChainTrace {
    let mut tree = Tree::single_node(model.data().class_count());
    populate_counts(&mut tree, model.data());
    let mut samples = Vec::with_capacity(config.iterations);
    let mut accepted = 0usize;
    let mut current = tree;
    for _ in 0..config.iterations {
        let outcome = mh_step(&current, model, &UNIFORM_KINDS, config.max_depth, &mut rng);
        accepted += usize::from(outcome.accepted);
        current = outcome.tree;
        samples.push(Sample {
            tree: current.clone(),
            log_joint: outcome.log_joint,
        });
    }
    ChainTrace { samples, accepted }
}

/// Run `config.chains` independent chains in parallel. Chain `i` uses RNG
/// stream `i` of `config.seed`, so results do not depend on scheduling.
pub fn run_chains(config: &ChainConfig, data: &Dataset) -> Result<McmcRun> {
    config.validate()?;
    let model = Model::new(data, config.a, config.beta);

    let traces: Vec<ChainTrace> = (0..config.chains)
        .into_par_iter()
        .map(|chain| run_single_chain(&model, config, unit_rng(config.seed, chain as u64)))
        .collect();

    let burn = (config.burn_in_fraction * config.iterations as f64).floor() as usize;
    let mut best = vec![f64::NEG_INFINITY; config.iterations];
    let mut worst = vec![f64::INFINITY; config.iterations];
    for trace in &traces {
        for (i, sample) in trace.samples.iter().enumerate() {
            if sample.log_joint > best[i] {
                best[i] = sample.log_joint;
            }
            if sample.log_joint < worst[i] {
                worst[i] = sample.log_joint;
            }
        }
    }
    let total_steps = config.chains * config.iterations;
    let accepted: usize = traces.iter().map(|t| t.accepted).sum();
    let retained = traces
        .into_iter()
        .map(|t| t.samples.into_iter().skip(burn).collect())
        .collect();

    Ok(McmcRun {
        retained,
        best_log_joint: best,
        worst_log_joint: worst,
        acceptance_rate: accepted as f64 / total_steps as f64,
    })
}
