//! Deterministic random streams.
//!
//! Every Monte-Carlo trial gets its own generator, keyed by a hash of
//! `(seed, n, p-index, trial)`, so results do not depend on how trials are
//! scheduled across threads.
//!
//! The key is a SplitMix64 chain: starting from `seed`, each field is folded
//! in as `h = splitmix64(h ^ field)`. The generator is ChaCha8
//! (`rand_chacha::ChaCha8Rng::seed_from_u64(key)`), a counter-based stream
//! cipher, and Gaussian variates come from `rand_distr::StandardNormal`
//! (ziggurat). Outputs are bit-stable for a fixed version of those crates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer applied to `x + golden gamma`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `fields` into `seed`.
pub fn derive_key(seed: u64, fields: &[u64]) -> u64 {
    fields.iter().fold(splitmix64(seed), |h, &f| splitmix64(h ^ f))
}

/// Generator for one `(n, p-index, trial)` cell of an experiment.
pub fn trial_rng(seed: u64, n: usize, p_index: usize, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_key(seed, &[n as u64, p_index as u64, trial as u64]))
}

/// Uniform `[0, 1)` from the top 53 bits of a 64-bit word.
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
