use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Instance;

/// Processing times are drawn uniformly from `1..=MAX_PROC_TIME_MS`.
pub const MAX_PROC_TIME_MS: u64 = 50;

pub const DEFAULT_WEIGHT_MAX: u64 = 10;

/// Seeded random instance.
///
/// Draw order is fixed (processing times, then weights, then the `i < j` pairs in
/// row-major order) so a seed reproduces the same instance on every platform.
pub fn random_instance(seed: u64, n: usize, density: f64, weight_max: u64) -> Instance {
    assert!(n >= 1, "instance needs at least one job");
    assert!((0.0..=1.0).contains(&density), "density must lie in [0, 1]");
    assert!(weight_max >= 1, "weight_max must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let proc_times: Vec<u64> = (0..n)
        .map(|_| rng.gen_range(1..=MAX_PROC_TIME_MS))
        .collect();
    let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=weight_max)).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    Instance::new(proc_times, weights, &edges).expect("forward edges are acyclic")
}
