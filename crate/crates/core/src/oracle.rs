//! Verification oracles: exhaustive path enumeration and seeded Monte Carlo.
//!
//! Both count visits to `U` at times `1..=n` (the start state is excluded)
//! and are kept deliberately independent of the recursion, series, and
//! closed-form routes so they can arbitrate between them.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::chain::{StochasticMatrix, SubsetMask};
use crate::error::{Error, Result};

/// Hard cap on `|S|^n` for exhaustive enumeration.
pub const PATH_ENUMERATION_LIMIT: u64 = 10_000_000;

/// Simulation is sharded into blocks of this many trajectories, each with its
/// own derived RNG stream, so the merged tally does not depend on how shards
/// are scheduled.
const SHARD_SIZE: u64 = 1 << 16;

/// Name of the generator recorded in output metadata.
pub const RNG_NAME: &str = "chacha12";

/// Exact pmf of the occupancy count over all `|S|^n` trajectories.
///
/// Depth-first traversal with a running probability; zero-probability
/// branches are pruned. Exact up to floating-point summation.
pub fn enumerate_paths(
    chain: &StochasticMatrix,
    subset: &SubsetMask,
    n: usize,
    start: usize,
) -> Result<Vec<f64>> {
    subset.check_len(chain.size())?;
    if start >= chain.size() {
        return Err(Error::StateOutOfRange {
            index: start,
            states: chain.size(),
        });
    }
    let states = chain.size() as u64;
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total
            .checked_mul(states)
            .filter(|&t| t <= PATH_ENUMERATION_LIMIT)
            .ok_or(Error::TooManyPaths {
                states: chain.size(),
                horizon: n,
                limit: PATH_ENUMERATION_LIMIT,
            })?;
    }
    let mut pmf = vec![0.0; n + 1];
    descend(chain.entries(), subset, n, start, 1.0, 0, &mut pmf);
    Ok(pmf)
}

fn descend(
    p: &Array2<f64>,
    subset: &SubsetMask,
    remaining: usize,
    state: usize,
    prob: f64,
    visits: usize,
    pmf: &mut [f64],
) {
    if remaining == 0 {
        pmf[visits] += prob;
        return;
    }
    for next in 0..p.ncols() {
        let step = p[(state, next)];
        if step == 0.0 {
            continue;
        }
        let visited = visits + usize::from(subset.contains(next));
        descend(p, subset, remaining - 1, next, prob * step, visited, pmf);
    }
}

/// Configuration for [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub samples: u64,
    pub seed: u64,
    pub start_state: usize,
}

/// Tally of simulated occupancy counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    counts: Vec<u64>,
    samples: u64,
}

impl EmpiricalDistribution {
    /// Per-`k` tallies; index `k` runs over `0..=n`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// Relative frequencies.
    pub fn pmf(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.samples as f64)
            .collect()
    }

    /// Per-bin z-scores against a reference pmf. Bins where the reference is
    /// 0 or 1 get a z-score of 0 when the tally agrees exactly and infinity
    /// otherwise.
    pub fn z_scores(&self, reference: &[f64]) -> Vec<f64> {
        self.counts
            .iter()
            .zip(reference)
            .map(|(&c, &p)| {
                let phat = c as f64 / self.samples as f64;
                let se = (p * (1.0 - p) / self.samples as f64).sqrt();
                if se == 0.0 {
                    if phat == p {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (phat - p) / se
                }
            })
            .collect()
    }
}

/// Inverse-CDF draw from one row. Ties at bin edges resolve to the lower
/// index; zero-probability states are never selected.
fn sample_from_cdf(row: &[f64], cdf: &[f64], u: f64) -> usize {
    let size = row.len();
    let mut j = cdf.partition_point(|&c| c < u).min(size - 1);
    while row[j] == 0.0 {
        if j + 1 < size && cdf[j] <= u {
            j += 1;
        } else {
            j -= 1;
        }
    }
    j
}

/// Draws `cfg.samples` independent trajectories of length `n` and tallies the
/// occupancy counts.
///
/// Sampling uses inverse-CDF draws from precomputed row CDFs with a ChaCha12
/// generator ([`RNG_NAME`]); runs are reproducible bit-for-bit for a fixed
/// seed. Trajectories are split into shards with independently derived
/// streams, so the tally is the same no matter how shards are distributed
/// over workers.
pub fn simulate(
    chain: &StochasticMatrix,
    subset: &SubsetMask,
    n: usize,
    cfg: &SimConfig,
) -> Result<EmpiricalDistribution> {
    subset.check_len(chain.size())?;
    if cfg.samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if cfg.start_state >= chain.size() {
        return Err(Error::StateOutOfRange {
            index: cfg.start_state,
            states: chain.size(),
        });
    }
    let size = chain.size();
    let rows: Vec<Vec<f64>> = (0..size).map(|i| chain.entries().row(i).to_vec()).collect();
    let cdfs: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .scan(0.0, |acc, &p| {
                    *acc += p;
                    Some(*acc)
                })
                .collect()
        })
        .collect();

    let mut counts = vec![0u64; n + 1];
    let shards = cfg.samples.div_ceil(SHARD_SIZE);
    for shard in 0..shards {
        let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
        rng.set_stream(shard);
        let in_shard = SHARD_SIZE.min(cfg.samples - shard * SHARD_SIZE);
        for _ in 0..in_shard {
            let mut state = cfg.start_state;
            let mut visits = 0usize;
            for _ in 0..n {
                let u: f64 = rng.gen();
                state = sample_from_cdf(&rows[state], &cdfs[state], u);
                visits += usize::from(subset.contains(state));
            }
            counts[visits] += 1;
        }
    }
    Ok(EmpiricalDistribution {
        counts,
        samples: cfg.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::occupancy_distribution;
    use approx::assert_abs_diff_eq;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    fn two_state() -> (StochasticMatrix, SubsetMask) {
        let m = StochasticMatrix::from_rows(&[vec![0.8, 0.2], vec![0.4, 0.6]]).unwrap();
        let mask = SubsetMask::from_indices(2, &[0]).unwrap();
        (m, mask)
    }

    #[test]
    fn enumerates_two_state_two_steps() {
        let (m, mask) = two_state();
        let pmf = enumerate_paths(&m, &mask, 2, 0).unwrap();
        assert_abs_diff_eq!(pmf[0], 0.12, epsilon = 1e-15);
        assert_abs_diff_eq!(pmf[1], 0.24, epsilon = 1e-15);
        assert_abs_diff_eq!(pmf[2], 0.64, epsilon = 1e-15);
    }

    #[test]
    fn single_step_is_the_row_split() {
        let (m, mask) = two_state();
        let pmf = enumerate_paths(&m, &mask, 1, 1).unwrap();
        assert_abs_diff_eq!(pmf[1], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(pmf[0], 0.6, epsilon = 1e-15);
    }

    #[test]
    fn empty_subset_is_a_point_mass_at_zero() {
        let (m, _) = two_state();
        let mask = SubsetMask::new(vec![false, false]);
        let pmf = enumerate_paths(&m, &mask, 5, 0).unwrap();
        // bin 0 carries the whole path sum, up to summation rounding
        assert_abs_diff_eq!(pmf[0], 1.0, epsilon = 1e-12);
        assert!(pmf[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn path_guard_trips() {
        let m = StochasticMatrix::from_rows(&vec![vec![0.2; 5]; 5]).unwrap();
        let mask = SubsetMask::from_indices(5, &[0]).unwrap();
        // 5^11 > 10^7
        assert!(matches!(
            enumerate_paths(&m, &mask, 11, 0),
            Err(Error::TooManyPaths { .. })
        ));
        assert!(enumerate_paths(&m, &mask, 10, 0).is_ok());
    }

    #[test]
    fn enumeration_matches_dp_on_a_skewed_chain() {
        let m = StochasticMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.3, 0.0, 0.7],
            vec![0.25, 0.25, 0.5],
        ])
        .unwrap();
        let mask = SubsetMask::from_indices(3, &[0, 2]).unwrap();
        let table = occupancy_distribution(&m, &mask, 8).unwrap();
        for start in 0..3 {
            let pmf = enumerate_paths(&m, &mask, 8, start).unwrap();
            for k in 0..=8 {
                assert_abs_diff_eq!(pmf[k], table.value(start, k), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn single_sample_tallies_once() {
        let (m, mask) = two_state();
        let cfg = SimConfig {
            samples: 1,
            seed: 7,
            start_state: 0,
        };
        let dist = simulate(&m, &mask, 6, &cfg).unwrap();
        assert_eq!(dist.samples(), 1);
        assert_eq!(dist.counts().iter().sum::<u64>(), 1);
    }

    #[test]
    fn fixed_seed_reproduces_exactly() {
        let (m, mask) = two_state();
        let cfg = SimConfig {
            samples: 10_000,
            seed: 20260811,
            start_state: 0,
        };
        let a = simulate(&m, &mask, 10, &cfg).unwrap();
        let b = simulate(&m, &mask, 10, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn full_subset_forces_all_mass_at_n() {
        let (m, _) = two_state();
        let mask = SubsetMask::new(vec![true, true]);
        let cfg = SimConfig {
            samples: 500,
            seed: 3,
            start_state: 1,
        };
        let dist = simulate(&m, &mask, 4, &cfg).unwrap();
        assert_eq!(dist.counts()[4], 500);
    }

    #[test]
    fn zero_samples_is_rejected() {
        let (m, mask) = two_state();
        let cfg = SimConfig {
            samples: 0,
            seed: 1,
            start_state: 0,
        };
        assert!(matches!(
            simulate(&m, &mask, 3, &cfg),
            Err(Error::ZeroSamples)
        ));
    }

    #[test]
    fn cdf_sampling_edges() {
        let row = [0.5, 0.5];
        let cdf = [0.5, 1.0];
        // tie at the bin edge resolves to the lower index
        assert_eq!(sample_from_cdf(&row, &cdf, 0.5), 0);
        assert_eq!(sample_from_cdf(&row, &cdf, 0.0), 0);
        assert_eq!(sample_from_cdf(&row, &cdf, 0.9999999), 1);

        // zero-probability states are skipped in both directions
        let row = [0.0, 1.0, 0.0];
        let cdf = [0.0, 1.0, 1.0];
        assert_eq!(sample_from_cdf(&row, &cdf, 0.0), 1);
        assert_eq!(sample_from_cdf(&row, &cdf, 0.7), 1);
        // floating-point overshoot past the last cdf entry clamps safely
        let row = [1.0, 0.0];
        let cdf = [0.9999999999999999, 0.9999999999999999];
        assert_eq!(sample_from_cdf(&row, &cdf, 0.99999999999999995), 0);
    }

    #[test]
    fn shard_boundaries_do_not_disturb_the_tally() {
        // crossing SHARD_SIZE must still give sum(counts) == samples
        let (m, mask) = two_state();
        let cfg = SimConfig {
            samples: (1 << 16) + 17,
            seed: 99,
            start_state: 0,
        };
        let dist = simulate(&m, &mask, 3, &cfg).unwrap();
        assert_eq!(dist.counts().iter().sum::<u64>(), cfg.samples);
    }

    #[test]
    fn chi_square_fit_against_dp() {
        let (m, mask) = two_state();
        let n = 10;
        let cfg = SimConfig {
            samples: 1_000_000,
            seed: 20260811,
            start_state: 0,
        };
        let dist = simulate(&m, &mask, n, &cfg).unwrap();
        let table = occupancy_distribution(&m, &mask, n).unwrap();
        let expected: Vec<f64> = (0..=n)
            .map(|k| table.value(0, k) * cfg.samples as f64)
            .collect();
        let mut stat = 0.0;
        let mut dof: i64 = -1;
        for (k, &e) in expected.iter().enumerate() {
            if e >= 10.0 {
                let o = dist.counts()[k] as f64;
                stat += (o - e) * (o - e) / e;
                dof += 1;
            }
        }
        assert!(dof >= 1);
        let critical = ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - 1e-4);
        assert!(
            stat <= critical,
            "chi-square {stat} exceeds critical value {critical} at {dof} dof"
        );
    }
}
