//! Fixed-seed inputs for the criterion benchmarks.

use boxproj_core::instances::uniform_instance;
use boxproj_core::ProjectionProblem;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Budget fraction of `sum(min(v, b))` used by every benchmark instance.
pub const BUDGET_FRACTION: f64 = 0.25;

/// Reproducible uniform instance of size `n`.
pub fn instance(n: usize, seed: u64) -> ProjectionProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
    uniform_instance(&mut rng, n, BUDGET_FRACTION)
}

/// Reproducible uniform values for selection benchmarks.
pub fn values(n: usize, seed: u64) -> Vec<f64> {
    instance(n, seed).v().to_vec()
}
