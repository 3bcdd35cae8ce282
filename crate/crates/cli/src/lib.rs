//! Benchmark harness over the treemc samplers: experiment configs,
//! cross-validated runs, result serialization, and comparison tables.

pub mod config;
pub mod experiment;
pub mod result;
pub mod table;

pub use config::{ExperimentConfig, MissingValueMode, SamplerKind};
pub use experiment::run_experiment;
pub use result::{emit_results, RunResult};
