//! Occupancy-time distributions for finite discrete-time Markov chains.
//!
//! Given a row-stochastic matrix `P` and a subset `U` of its states, the
//! crate computes the exact law of the occupancy count `N_n` — the number of
//! times the chain sits in `U` during steps `1..=n` — along with its
//! generating functions and moments. The same quantity is reachable through
//! several routes that check one another:
//!
//! - [`dp::occupancy_distribution`]: the layer-by-layer matrix recursion,
//!   the reference route;
//! - [`series::gf_coefficients`] / [`series::vw_reduction`]: coefficient
//!   extraction from the matrix generating function, full-size or reduced to
//!   the `U` block;
//! - [`two_state::g0_closed`] / [`two_state::g1_closed`]: explicit closed
//!   forms for the two-state chain;
//! - [`oracle::enumerate_paths`] / [`oracle::simulate`]: exhaustive and
//!   Monte Carlo verification oracles.
//!
//! All results are reported in the caller's original state order; the
//! U-first permutation used internally never leaks.
//!
//! ```
//! use occupancy_core::{SubsetMask, StochasticMatrix};
//! use occupancy_core::dp::occupancy_distribution;
//!
//! let p = StochasticMatrix::from_rows(&[vec![0.8, 0.2], vec![0.4, 0.6]])?;
//! let u = SubsetMask::from_indices(2, &[0])?;
//! let table = occupancy_distribution(&p, &u, 2)?;
//! assert!((table.value(0, 2) - 0.64).abs() < 1e-12);
//! # Ok::<(), occupancy_core::Error>(())
//! ```

pub mod chain;
mod dd;
pub mod dp;
pub mod error;
pub mod moments;
pub mod oracle;
pub mod series;
pub mod two_state;

pub use chain::{
    BlockDecomposition, LiftedPair, StatePermutation, StochasticMatrix, SubsetMask,
    DEFAULT_ROW_SUM_TOLERANCE,
};
pub use dp::OccupancyTable;
pub use error::{Error, Result};
pub use moments::{CostFunction, PgfEvaluation};
pub use oracle::{EmpiricalDistribution, SimConfig};
pub use series::{MatrixSeries, VectorSeries};
pub use two_state::{ProofCoefficients, TwoStateParams};
