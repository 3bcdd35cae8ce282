//! Seed derivation for reproducible parallel runs.
//!
//! A master seed fans out to per-fold seeds with a counter-based mix, and each
//! chain or particle gets its own ChaCha stream indexed by its unit number.
//! Adding units or folds never perturbs the streams of existing ones.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream id reserved for fold-assignment shuffling.
pub const STREAM_KFOLD: u64 = 0xF01D;

/// Domain tag for per-fold sampler seeds.
pub const DOMAIN_FOLD: u64 = 1;

/// splitmix64 finalizer; full-period mix of a 64-bit counter.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a sub-seed from `(seed, domain, index)`; pure and collision-mixed.
pub fn mix_seed(seed: u64, domain: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(domain ^ splitmix64(index)))
}

/// RNG stream for one chain or particle. Streams with distinct `unit` are
/// statistically independent for a fixed seed.
pub fn unit_rng(seed: u64, unit: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(unit);
    rng
}

/// RNG stream for auxiliary tasks (fold shuffles and the like).
pub fn tagged_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
