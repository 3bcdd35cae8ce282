//! Population sampler with pheromone-guided move selection.
//!
//! A fixed population of trees evolves jointly. Every iteration each
//! particle picks a move-selection strategy, proposes, and is accepted or
//! rejected exactly like an MH chain. What couples the particles is the
//! pheromone bookkeeping:
//!
//! * permanent pheromones: a persistent 4-entry distribution over move
//!   kinds, reinforced each iteration by the kinds behind accepted
//!   proposals, with an anti-dominance cap;
//! * temporary pheromones: per-iteration records of which particles moved
//!   (positive/negative exploration) and which kinds worked
//!   (effective/ineffective moves), biasing only the next iteration and
//!   then cleared.
//!
//! Per-particle RNG streams make the iteration barrier-parallel without
//! changing any result.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::mcmc::{step_with_kind, StepOutcome, UNIFORM_KINDS};
use crate::model::Model;
use crate::moves::{draw_kind, renormalize, valid_moves, MoveKind, KIND_COUNT};
use crate::rng::unit_rng;
use crate::tree::{populate_counts, Tree};

/// Persistent distribution over the four move kinds, ordered
/// [Grow, Prune, Change, Swap].
#[derive(Debug, Clone, PartialEq)]
pub struct PermanentPheromones {
    probs: [f64; KIND_COUNT],
}

impl Default for PermanentPheromones {
    fn default() -> Self {
        Self::new()
    }
}

impl PermanentPheromones {
    /// Starts at the uniform "initial possibilities".
    pub fn new() -> Self {
        PermanentPheromones {
            probs: UNIFORM_KINDS,
        }
    }

    pub fn probs(&self) -> &[f64; KIND_COUNT] {
        &self.probs
    }
}

/// Add each effective move's count to its kind, renormalize, and apply the
/// anti-dominance cap: any entry above 0.8 is reset to 0.4 with the other
/// three at 0.2 each.
pub fn update_permanent(
    perm: &PermanentPheromones,
    effective_moves: &[MoveKind],
) -> PermanentPheromones {
    let mut counts = [0usize; KIND_COUNT];
    for kind in effective_moves {
        counts[kind.index()] += 1;
    }
    let total: usize = counts.iter().sum();
    let denom = 1.0 + total as f64;
    let mut probs = [0.0; KIND_COUNT];
    for i in 0..KIND_COUNT {
        probs[i] = (perm.probs[i] + counts[i] as f64) / denom;
    }
    if let Some(dominant) = (0..KIND_COUNT).find(|&i| probs[i] > 0.8) {
        for (i, p) in probs.iter_mut().enumerate() {
            *p = if i == dominant { 0.4 } else { 0.2 };
        }
    }
    PermanentPheromones { probs }
}

/// Per-iteration exploration records; populated during positioning and
/// consumed by the next iteration's strategy selection, then discarded.
#[derive(Debug, Clone, Default)]
pub struct TemporaryPheromones {
    pub positive_exploration: BTreeSet<usize>,
    pub negative_exploration: BTreeSet<usize>,
    pub effective_moves: Vec<MoveKind>,
    pub ineffective_moves: Vec<MoveKind>,
}

impl TemporaryPheromones {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.positive_exploration.is_empty()
            && self.negative_exploration.is_empty()
            && self.effective_moves.is_empty()
            && self.ineffective_moves.is_empty()
    }
}

/// One member of the population.
#[derive(Debug, Clone)]
pub struct Particle {
    pub tree: Tree,
    pub log_joint: f64,
}

/// Fixed-size set of particles.
#[derive(Debug, Clone)]
pub struct Population {
    pub particles: Vec<Particle>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn best_log_joint(&self) -> f64 {
        self.particles
            .iter()
            .map(|p| p.log_joint)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn worst_log_joint(&self) -> f64 {
        self.particles
            .iter()
            .map(|p| p.log_joint)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Mixture weights over the three sampling strategies; the uniform branch
/// gets the remainder. Zeroing both pheromone branches makes the sampler
/// consume the same RNG stream as a plain chain (no strategy draw at all).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyWeights {
    pub temporary: f64,
    pub permanent: f64,
}

impl Default for StrategyWeights {
    fn default() -> Self {
        StrategyWeights {
            temporary: 0.45,
            permanent: 0.45,
        }
    }
}

impl StrategyWeights {
    pub fn uniform_only() -> Self {
        StrategyWeights {
            temporary: 0.0,
            permanent: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.temporary < 0.0 || self.permanent < 0.0 || self.temporary + self.permanent > 1.0 {
            return Err(Error::InvalidConfig(
                "strategy weights must be nonnegative and sum to at most 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SmcConfig {
    pub particles: usize,
    pub iterations: usize,
    pub a: f64,
    pub beta: f64,
    pub max_depth: usize,
    pub seed: u64,
    pub strategy: StrategyWeights,
    /// Probability of continuing to grow during population initialization;
    /// the grow count per particle is geometric, capped at `max_depth`.
    pub init_grow_prob: f64,
    /// Keep a clone of the population after every iteration (tests only;
    /// memory-heavy for large populations).
    pub record_trajectory: bool,
}

impl Default for SmcConfig {
    fn default() -> Self {
        SmcConfig {
            particles: 1000,
            iterations: 10,
            a: 1.0,
            beta: 2.0,
            max_depth: 15,
            seed: 0,
            strategy: StrategyWeights::default(),
            init_grow_prob: 0.5,
            record_trajectory: false,
        }
    }
}

impl SmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.particles == 0 {
            return Err(Error::InvalidConfig("particles must be at least 1".into()));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidConfig("max_depth must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.init_grow_prob) {
            return Err(Error::InvalidConfig(
                "init_grow_prob must lie in [0, 1]".into(),
            ));
        }
        if self.a <= 0.0 || self.beta < 0.0 {
            return Err(Error::InvalidConfig(
                "prior constants need a > 0 and beta >= 0".into(),
            ));
        }
        self.strategy.validate()
    }
}

/// Independent random starts: each particle begins as a single-node tree and
/// applies a geometric number of uniform grows (continue probability
/// `init_grow_prob`, count capped at `max_depth`). A zero grow probability
/// consumes no RNG draws at all.
pub fn initialize_population(
    n: usize,
    model: &Model<'_>,
    max_depth: usize,
    init_grow_prob: f64,
    rngs: &mut [ChaCha8Rng],
) -> Population {
    assert_eq!(rngs.len(), n);
    let particles = rngs
        .iter_mut()
        .map(|rng| {
            let mut tree = Tree::single_node(model.data().class_count());
            if init_grow_prob > 0.0 {
                let mut grows = 0usize;
                while grows < max_depth {
                    let u: f64 = rng.random();
                    if u >= init_grow_prob {
                        break;
                    }
                    let growable = tree.growable_leaves(max_depth);
                    if growable.is_empty() {
                        break;
                    }
                    let leaf = growable[rng.random_range(0..growable.len())];
                    let (feature, threshold) = model.space().sample_split(rng);
                    tree = tree.grow_at(leaf, feature, threshold);
                    grows += 1;
                }
            }
            populate_counts(&mut tree, model.data());
            let log_joint = model.log_joint(&tree);
            Particle { tree, log_joint }
        })
        .collect();
    Population { particles }
}

/// Pick this particle's move-selection distribution and draw a kind from it.
///
/// Branches on one uniform draw: temporary pheromones (weight
/// `strategy.temporary`), permanent pheromones (`strategy.permanent`), or
/// the uniform "initial possibilities" for the rest. Any branch that comes
/// up empty — no membership record, an exhausted move list, or a
/// renormalization with no mass on the valid moves — falls back to the
/// uniform branch.
///
/// Returns the base distribution (for reverse-probability evaluation), the
/// distribution renormalized over this tree's valid moves (stored in the
/// move record), and the drawn kind.
pub fn select_strategy<R: Rng>(
    particle: usize,
    tree: &Tree,
    max_depth: usize,
    previous: &TemporaryPheromones,
    perm: &PermanentPheromones,
    strategy: StrategyWeights,
    rng: &mut R,
) -> ([f64; KIND_COUNT], [f64; KIND_COUNT], MoveKind) {
    let valid = valid_moves(tree, max_depth);

    let pheromone_mass = strategy.temporary + strategy.permanent;
    let mut base = UNIFORM_KINDS;
    if pheromone_mass > 0.0 {
        let u: f64 = rng.random();
        if u <= strategy.temporary {
            if let Some(probs) = temporary_base(particle, previous, rng) {
                base = probs;
            }
        } else if u <= pheromone_mass {
            base = *perm.probs();
        }
    }

    let probs = match renormalize(&base, &valid) {
        Some(p) => p,
        None => {
            // pheromone distribution has no mass on any valid kind
            base = UNIFORM_KINDS;
            renormalize(&base, &valid).expect("some move is valid for max_depth >= 1")
        }
    };
    let kind = draw_kind(&probs, rng);
    (base, probs, kind)
}

/// The temporary-pheromone branch. Positive-exploration particles draw a
/// kind `m` from the ineffective list, delete every copy of `m`, and use the
/// remainder's empirical distribution; negative-exploration particles use
/// the effective list's empirical distribution. `None` means fall back to
/// uniform.
fn temporary_base<R: Rng>(
    particle: usize,
    previous: &TemporaryPheromones,
    rng: &mut R,
) -> Option<[f64; KIND_COUNT]> {
    if previous.positive_exploration.contains(&particle) {
        if previous.ineffective_moves.is_empty() {
            return None;
        }
        let removed =
            previous.ineffective_moves[rng.random_range(0..previous.ineffective_moves.len())];
        let remaining: Vec<MoveKind> = previous
            .ineffective_moves
            .iter()
            .copied()
            .filter(|&m| m != removed)
            .collect();
        empirical(&remaining)
    } else if previous.negative_exploration.contains(&particle) {
        empirical(&previous.effective_moves)
    } else {
        None
    }
}

fn empirical(moves: &[MoveKind]) -> Option<[f64; KIND_COUNT]> {
    if moves.is_empty() {
        return None;
    }
    let mut probs = [0.0; KIND_COUNT];
    for kind in moves {
        probs[kind.index()] += 1.0;
    }
    for p in probs.iter_mut() {
        *p /= moves.len() as f64;
    }
    Some(probs)
}

/// One positioning iteration: every particle selects a strategy, proposes,
/// and adopts the proposal iff its acceptance probability exceeds a fresh
/// uniform draw. Accepted particles land in positive exploration with their
/// kind in the effective list; rejected ones in negative exploration and
/// the ineffective list.
///
/// Particle steps run in parallel on per-particle RNG streams; the
/// temporary lists are assembled afterwards in particle order, so the
/// result is schedule-independent.
pub fn positioning_step(
    population: &Population,
    model: &Model<'_>,
    previous: &TemporaryPheromones,
    perm: &PermanentPheromones,
    strategy: StrategyWeights,
    max_depth: usize,
    rngs: &mut [ChaCha8Rng],
) -> (Population, TemporaryPheromones, Vec<f64>) {
    assert_eq!(rngs.len(), population.len());

    struct ParticleOutcome {
        outcome: StepOutcome,
        kind: MoveKind,
    }

    let results: Vec<ParticleOutcome> = population
        .particles
        .par_iter()
        .zip(rngs.par_iter_mut())
        .enumerate()
        .map(|(i, (particle, rng))| {
            let (base, probs, kind) =
                select_strategy(i, &particle.tree, max_depth, previous, perm, strategy, rng);
            let outcome = step_with_kind(&particle.tree, model, &base, probs, kind, max_depth, rng);
            ParticleOutcome { outcome, kind }
        })
        .collect();

    let mut temp = TemporaryPheromones::empty();
    let mut alphas = Vec::with_capacity(results.len());
    let particles = results
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            alphas.push(r.outcome.alpha);
            if r.outcome.accepted {
                temp.positive_exploration.insert(i);
                temp.effective_moves.push(r.kind);
            } else {
                temp.negative_exploration.insert(i);
                temp.ineffective_moves.push(r.kind);
            }
            Particle {
                tree: r.outcome.tree,
                log_joint: r.outcome.log_joint,
            }
        })
        .collect();

    (Population { particles }, temp, alphas)
}

/// Result of a full population run.
#[derive(Debug, Clone)]
pub struct SmcRun {
    pub population: Population,
    pub initial_best: f64,
    pub initial_worst: f64,
    /// Population best/worst log-joint after each iteration.
    pub best_log_joint: Vec<f64>,
    pub worst_log_joint: Vec<f64>,
    /// Permanent pheromone vector before the first iteration and after each
    /// one (`iterations + 1` entries).
    pub pheromone_history: Vec<[f64; KIND_COUNT]>,
    pub acceptance_rate: f64,
    /// Populations after each iteration, when requested.
    pub trajectory: Option<Vec<Population>>,
}

/// Run the population sampler: initialize, then iterate positioning,
/// permanent-pheromone reinforcement, and temporary-pheromone turnover.
pub fn run_smc_ea(config: &SmcConfig, data: &Dataset) -> Result<SmcRun> {
    config.validate()?;
    let model = Model::new(data, config.a, config.beta);
    let n = config.particles;
    let mut rngs: Vec<ChaCha8Rng> = (0..n).map(|i| unit_rng(config.seed, i as u64)).collect();

    let mut population = initialize_population(
        n,
        &model,
        config.max_depth,
        config.init_grow_prob,
        &mut rngs,
    );
    let initial_best = population.best_log_joint();
    let initial_worst = population.worst_log_joint();

    let mut perm = PermanentPheromones::new();
    let mut temp = TemporaryPheromones::empty();
    let mut best = Vec::with_capacity(config.iterations);
    let mut worst = Vec::with_capacity(config.iterations);
    let mut pheromone_history = vec![*perm.probs()];
    let mut accepted = 0usize;
    let mut trajectory = config.record_trajectory.then(Vec::new);

    for _ in 0..config.iterations {
        let (next, new_temp, _alphas) = positioning_step(
            &population,
            &model,
            &temp,
            &perm,
            config.strategy,
            config.max_depth,
            &mut rngs,
        );
        population = next;
        perm = update_permanent(&perm, &new_temp.effective_moves);
        accepted += new_temp.effective_moves.len();
        // last iteration's lists are dropped here; only the fresh ones
        // survive into the next iteration
        temp = new_temp;
        best.push(population.best_log_joint());
        worst.push(population.worst_log_joint());
        pheromone_history.push(*perm.probs());
        if let Some(t) = trajectory.as_mut() {
            t.push(population.clone());
        }
    }
    drop(temp); // the final iteration's lists expire unused

    Ok(SmcRun {
        population,
        initial_best,
        initial_worst,
        best_log_joint: best,
        worst_log_joint: worst,
        pheromone_history,
        acceptance_rate: accepted as f64 / (n * config.iterations) as f64,
        trajectory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::hand_dataset;

    #[test]
    fn permanent_update_worked_example() {
        // by hand: [0.25 x4] + counts {G:2, P:1} over denominator 4
        let perm = PermanentPheromones::new();
        let updated = update_permanent(&perm, &[MoveKind::Grow, MoveKind::Grow, MoveKind::Prune]);
        assert_eq!(updated.probs(), &[0.5625, 0.3125, 0.0625, 0.0625]);
    }

    #[test]
    fn permanent_update_without_moves_is_identity() {
        let perm = PermanentPheromones::new();
        assert_eq!(update_permanent(&perm, &[]).probs(), perm.probs());
    }

    #[test]
    fn dominance_cap_rewrites_distribution() {
        let perm = PermanentPheromones {
            probs: [0.85, 0.05, 0.05, 0.05],
        };
        // no effective moves: the update itself keeps the vector, then the
        // cap fires on the dominant entry
        let updated = update_permanent(&perm, &[]);
        assert_eq!(updated.probs(), &[0.4, 0.2, 0.2, 0.2]);

        // a burst of Prune acceptances pushes Prune past 0.8
        let perm = PermanentPheromones::new();
        let moves = vec![MoveKind::Prune; 50];
        let updated = update_permanent(&perm, &moves);
        assert_eq!(updated.probs(), &[0.2, 0.4, 0.2, 0.2]);
    }

    #[test]
    fn permanent_probs_always_normalized() {
        let mut rng = unit_rng(31, 0);
        let mut perm = PermanentPheromones::new();
        for _ in 0..1000 {
            let count = rng.random_range(0..20);
            let moves: Vec<MoveKind> = (0..count)
                .map(|_| MoveKind::ALL[rng.random_range(0..KIND_COUNT)])
                .collect();
            perm = update_permanent(&perm, &moves);
            let total: f64 = perm.probs().iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
            assert!(perm.probs().iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn first_iteration_with_empty_lists_falls_back_to_uniform() {
        let data = hand_dataset();
        let mut tree = Tree::single_node(2);
        populate_counts(&mut tree, &data);
        let previous = TemporaryPheromones::empty();
        let perm = PermanentPheromones::new();
        let mut rng = unit_rng(37, 0);
        let (base, probs, kind) = select_strategy(
            0,
            &tree,
            15,
            &previous,
            &perm,
            StrategyWeights::default(),
            &mut rng,
        );
        assert_eq!(base, UNIFORM_KINDS);
        // single-node tree: only Grow is valid
        assert_eq!(probs, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(kind, MoveKind::Grow);
    }

    #[test]
    fn deletion_rule_removes_every_copy() {
        // positive-exploration particle, ineffective = {P, P, C}: whichever
        // kind gets removed, the remainder is a single-kind point mass
        let mut previous = TemporaryPheromones::empty();
        previous.positive_exploration.insert(0);
        previous.ineffective_moves = vec![MoveKind::Prune, MoveKind::Prune, MoveKind::Change];
        let mut rng = unit_rng(41, 0);
        let mut saw = [false; KIND_COUNT];
        for _ in 0..100 {
            let base = temporary_base(0, &previous, &mut rng).unwrap();
            if base[MoveKind::Change.index()] == 1.0 {
                // removed Prune: remaining {C}
                assert_eq!(base, [0.0, 0.0, 1.0, 0.0]);
                saw[MoveKind::Change.index()] = true;
            } else {
                // removed Change: remaining {P, P}
                assert_eq!(base, [0.0, 1.0, 0.0, 0.0]);
                saw[MoveKind::Prune.index()] = true;
            }
        }
        assert!(saw[MoveKind::Change.index()] && saw[MoveKind::Prune.index()]);
    }

    #[test]
    fn negative_particles_copy_effective_distribution() {
        let mut previous = TemporaryPheromones::empty();
        previous.negative_exploration.insert(3);
        previous.effective_moves = vec![MoveKind::Grow, MoveKind::Grow, MoveKind::Swap];
        let mut rng = unit_rng(43, 0);
        let base = temporary_base(3, &previous, &mut rng).unwrap();
        assert_eq!(base, [2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0]);
    }

    #[test]
    fn uniform_branch_ignores_pheromones() {
        // strategy weights force the uniform branch regardless of lists
        let data = hand_dataset();
        let mut tree = Tree::single_node(2).grow_at(0, 0, 0.5);
        populate_counts(&mut tree, &data);
        let mut previous = TemporaryPheromones::empty();
        previous.positive_exploration.insert(0);
        previous.ineffective_moves = vec![MoveKind::Prune];
        let perm = PermanentPheromones {
            probs: [0.97, 0.01, 0.01, 0.01],
        };
        let mut rng = unit_rng(47, 0);
        let (base, _, _) = select_strategy(
            0,
            &tree,
            15,
            &previous,
            &perm,
            StrategyWeights::uniform_only(),
            &mut rng,
        );
        assert_eq!(base, UNIFORM_KINDS);
    }

    #[test]
    fn high_strategy_draw_takes_uniform_branch() {
        // u2 beyond the pheromone mass ignores both pheromone sources
        let data = hand_dataset();
        let mut tree = Tree::single_node(2).grow_at(0, 0, 0.5);
        populate_counts(&mut tree, &data);
        let mut previous = TemporaryPheromones::empty();
        previous.positive_exploration.insert(0);
        previous.ineffective_moves = vec![MoveKind::Prune, MoveKind::Change];
        let perm = PermanentPheromones {
            probs: [0.91, 0.03, 0.03, 0.03],
        };
        // find a stream whose first draw exceeds 0.9
        let seed = (0..)
            .find(|&s| unit_rng(s, 0).random::<f64>() > 0.9)
            .unwrap();
        let mut rng = unit_rng(seed, 0);
        let (base, _, _) = select_strategy(
            0,
            &tree,
            15,
            &previous,
            &perm,
            StrategyWeights::default(),
            &mut rng,
        );
        assert_eq!(base, UNIFORM_KINDS);
    }

    #[test]
    fn positioning_partitions_population() {
        let data = hand_dataset();
        let model = Model::new(&data, 1.0, 2.0);
        let n = 32;
        let mut rngs: Vec<ChaCha8Rng> = (0..n).map(|i| unit_rng(53, i as u64)).collect();
        let mut population = initialize_population(n, &model, 15, 0.5, &mut rngs);
        let mut temp = TemporaryPheromones::empty();
        let mut perm = PermanentPheromones::new();
        for _ in 0..20 {
            let (next, new_temp, alphas) = positioning_step(
                &population,
                &model,
                &temp,
                &perm,
                StrategyWeights::default(),
                15,
                &mut rngs,
            );
            assert_eq!(next.len(), n);
            assert_eq!(alphas.len(), n);
            assert!(alphas.iter().all(|&a| (0.0..=1.0).contains(&a)));
            let pos = &new_temp.positive_exploration;
            let neg = &new_temp.negative_exploration;
            assert_eq!(pos.len() + neg.len(), n);
            assert!(pos.intersection(neg).next().is_none());
            assert_eq!(new_temp.effective_moves.len(), pos.len());
            assert_eq!(new_temp.ineffective_moves.len(), neg.len());
            for (i, &alpha) in alphas.iter().enumerate() {
                if alpha == 1.0 {
                    assert!(pos.contains(&i), "certain acceptance must move");
                }
                if alpha == 0.0 {
                    assert!(neg.contains(&i), "certain rejection must stay");
                }
            }
            perm = update_permanent(&perm, &new_temp.effective_moves);
            temp = new_temp;
            population = next;
        }
    }

    #[test]
    fn population_size_is_constant() {
        let data = hand_dataset();
        let config = SmcConfig {
            particles: 17,
            iterations: 8,
            seed: 5,
            record_trajectory: true,
            ..SmcConfig::default()
        };
        let run = run_smc_ea(&config, &data).unwrap();
        assert_eq!(run.population.len(), 17);
        for pop in run.trajectory.as_ref().unwrap() {
            assert_eq!(pop.len(), 17);
        }
    }

    #[test]
    fn single_particle_single_iteration() {
        let data = hand_dataset();
        let config = SmcConfig {
            particles: 1,
            iterations: 1,
            seed: 2,
            ..SmcConfig::default()
        };
        let run = run_smc_ea(&config, &data).unwrap();
        assert_eq!(run.best_log_joint.len(), 1);
        assert_eq!(run.pheromone_history.len(), 2);
    }

    #[test]
    fn pheromones_after_first_iteration_match_manual_update() {
        let data = hand_dataset();
        let config = SmcConfig {
            particles: 24,
            iterations: 1,
            seed: 9,
            ..SmcConfig::default()
        };
        let run = run_smc_ea(&config, &data).unwrap();

        // replay the first iteration by hand
        let model = Model::new(&data, config.a, config.beta);
        let mut rngs: Vec<ChaCha8Rng> = (0..config.particles)
            .map(|i| unit_rng(9, i as u64))
            .collect();
        let population = initialize_population(
            config.particles,
            &model,
            config.max_depth,
            config.init_grow_prob,
            &mut rngs,
        );
        let (_, temp, _) = positioning_step(
            &population,
            &model,
            &TemporaryPheromones::empty(),
            &PermanentPheromones::new(),
            config.strategy,
            config.max_depth,
            &mut rngs,
        );
        let expected = update_permanent(&PermanentPheromones::new(), &temp.effective_moves);
        assert_eq!(&run.pheromone_history[1], expected.probs());
    }

    #[test]
    fn bare_root_frequency_matches_geometric_start() {
        let data = hand_dataset();
        let model = Model::new(&data, 1.0, 2.0);
        let n = 2000;
        let mut rngs: Vec<ChaCha8Rng> = (0..n).map(|i| unit_rng(61, i as u64)).collect();
        let pop = initialize_population(n, &model, 15, 0.5, &mut rngs);
        let bare = pop
            .particles
            .iter()
            .filter(|p| p.tree.node_count() == 1)
            .count();
        let frac = bare as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.05, "bare-root fraction {frac}");
    }
}
