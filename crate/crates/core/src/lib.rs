//! Bayesian classification trees sampled two ways: conventional multi-chain
//! Metropolis-Hastings and a pheromone-guided population sampler, plus the
//! dataset handling and enumeration oracle needed to benchmark them.

pub mod data;
pub mod error;
pub mod mcmc;
pub mod model;
pub mod moves;
pub mod oracle;
pub mod rng;
pub mod smc;
pub mod tree;

#[cfg(test)]
pub(crate) mod test_util;

pub use error::{Error, Result};
