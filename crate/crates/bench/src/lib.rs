//! Fixed inputs shared by the benchmarks.

use volterra::{oracles::random_density, Density, Signal};

/// A deterministic, sign-changing signal of length `n`.
pub fn wiggle(n: usize) -> Signal {
    Signal::sample(|x| (23.0 * x).sin() + 0.5 * (7.0 * x).cos(), n).expect("n > 0")
}

/// Two densities of length `n` from a fixed stream.
pub fn density_pair(n: usize) -> (Density, Density) {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(n as u64);
    (random_density(&mut rng, n), random_density(&mut rng, n))
}
