//! Shared chain builders for the benchmark suite.

use occupancy_core::{StochasticMatrix, SubsetMask};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// A dense random row-stochastic chain with a fixed seed.
pub fn dense_chain(size: usize, seed: u64) -> StochasticMatrix {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..size)
        .map(|_| {
            let raw: Vec<f64> = (0..size).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let sum: f64 = raw.iter().sum();
            raw.into_iter().map(|x| x / sum).collect()
        })
        .collect();
    StochasticMatrix::from_rows(&rows).expect("rows are normalized")
}

/// The first `members` states as the tracked subset.
pub fn leading_subset(size: usize, members: usize) -> SubsetMask {
    let indices: Vec<usize> = (0..members).collect();
    SubsetMask::from_indices(size, &indices).expect("indices in range")
}
