//! A one-particle population run with both pheromone branches disabled must
//! be the same Markov chain as the plain MCMC module: identical trees and
//! bit-identical log-joints at every iteration under the same seed.

mod common;

use common::hand_dataset;
use treemc::mcmc::{run_chains, ChainConfig};
use treemc::smc::{run_smc_ea, SmcConfig, StrategyWeights};

#[test]
fn uniform_only_single_particle_equals_single_chain() {
    let data = hand_dataset();
    let seed = 0xCAFE;
    let iterations = 300;

    let chain_config = ChainConfig {
        iterations,
        chains: 1,
        seed,
        burn_in_fraction: 0.0,
        ..ChainConfig::default()
    };
    let mcmc = run_chains(&chain_config, &data).unwrap();

    let smc_config = SmcConfig {
        particles: 1,
        iterations,
        seed,
        strategy: StrategyWeights::uniform_only(),
        init_grow_prob: 0.0,
        record_trajectory: true,
        ..SmcConfig::default()
    };
    let smc = run_smc_ea(&smc_config, &data).unwrap();

    let chain = &mcmc.retained[0];
    let trajectory = smc.trajectory.as_ref().unwrap();
    assert_eq!(chain.len(), trajectory.len());
    for (i, (sample, population)) in chain.iter().zip(trajectory).enumerate() {
        let particle = &population.particles[0];
        assert_eq!(sample.tree, particle.tree, "trees diverge at iteration {i}");
        assert_eq!(
            sample.log_joint.to_bits(),
            particle.log_joint.to_bits(),
            "log-joints diverge at iteration {i}"
        );
    }
}
