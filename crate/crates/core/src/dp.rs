//! Forward recursion for the occupancy distribution.
//!
//! `g_i(n,k) = Pr(N_n = k | X_0 = i)` where `N_n` counts the visits to `U`
//! at times `1..=n`; the initial state does not contribute. Layer `n` follows
//! from layer `n-1` via `g(n,k) = A g(n-1,k-1) + B g(n-1,k)`, seeded with the
//! convention `g(0,0) = 1`. This route is the reference the generating
//! function and closed-form routes are checked against.

use ndarray::{Array1, Array2};

use crate::chain::{LiftedPair, StochasticMatrix, SubsetMask};
use crate::error::Result;

/// The full table `g_i(n,k)` for one horizon, reported in original state
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyTable {
    horizon: usize,
    /// Shape `(states, horizon + 1)`; row `i`, column `k` holds `g_i(n,k)`.
    values: Array2<f64>,
    labels: Vec<String>,
}

impl OccupancyTable {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn n_states(&self) -> usize {
        self.values.nrows()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `g_i(n,k)` for this table's horizon.
    pub fn value(&self, state: usize, k: usize) -> f64 {
        self.values[(state, k)]
    }

    /// The pmf over `k = 0..=n` for one start state.
    pub fn pmf(&self, state: usize) -> Vec<f64> {
        self.values.row(state).to_vec()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// `E[N_n | X_0 = i]` read off the table.
    pub fn mean(&self, state: usize) -> f64 {
        self.values
            .row(state)
            .iter()
            .enumerate()
            .map(|(k, g)| k as f64 * g)
            .sum()
    }

    /// `Var[N_n | X_0 = i]` read off the table. The pgf is deliberately not
    /// differentiated for this; the table already is the coefficient list.
    pub fn variance(&self, state: usize) -> f64 {
        let mean = self.mean(state);
        let second: f64 = self
            .values
            .row(state)
            .iter()
            .enumerate()
            .map(|(k, g)| (k * k) as f64 * g)
            .sum();
        second - mean * mean
    }

    pub(crate) fn from_parts(horizon: usize, values: Array2<f64>, labels: Vec<String>) -> Self {
        Self {
            horizon,
            values,
            labels,
        }
    }
}

/// One DP layer: `layer[k]` is the state vector `g(m,k)` in permuted order.
fn next_layer(pair: &LiftedPair, prev: &[Array1<f64>]) -> Vec<Array1<f64>> {
    let m = prev.len(); // new horizon
    let mut layer = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let mut v = Array1::zeros(pair.size());
        if k >= 1 {
            v = v + pair.a().dot(&prev[k - 1]);
        }
        if k < m {
            v = v + pair.b().dot(&prev[k]);
        }
        layer.push(v);
    }
    layer
}

fn layer_to_table(
    pair: &LiftedPair,
    layer: &[Array1<f64>],
    horizon: usize,
    labels: &[String],
) -> OccupancyTable {
    let n_states = pair.size();
    let mut values = Array2::zeros((n_states, horizon + 1));
    for (k, v) in layer.iter().enumerate() {
        let restored = pair.order().restore_vector(v);
        for i in 0..n_states {
            values[(i, k)] = restored[i];
        }
    }
    OccupancyTable::from_parts(horizon, values, labels.to_vec())
}

/// Computes the occupancy distribution at horizon `n`.
///
/// `n = 0` returns the convention table `g_i(0,0) = 1`, so callers never
/// special-case it. Only the current and previous layers are kept. Cost is
/// `O(n² |S|²)` time and `O(n |S|)` working space.
pub fn occupancy_distribution(
    chain: &StochasticMatrix,
    subset: &SubsetMask,
    n: usize,
) -> Result<OccupancyTable> {
    let pair = chain.decompose(subset)?.lift();
    let mut layer = vec![Array1::ones(pair.size())];
    for _ in 0..n {
        layer = next_layer(&pair, &layer);
    }
    Ok(layer_to_table(&pair, &layer, n, chain.labels()))
}

/// Computes the tables for every horizon `0..=n` in one forward pass.
///
/// Used when the whole trajectory is wanted (e.g. the CLI's all-horizons
/// output); memory is `O(n² |S|)`.
pub fn occupancy_evolution(
    chain: &StochasticMatrix,
    subset: &SubsetMask,
    n: usize,
) -> Result<Vec<OccupancyTable>> {
    let pair = chain.decompose(subset)?.lift();
    let mut layer = vec![Array1::ones(pair.size())];
    let mut tables = vec![layer_to_table(&pair, &layer, 0, chain.labels())];
    for m in 1..=n {
        layer = next_layer(&pair, &layer);
        tables.push(layer_to_table(&pair, &layer, m, chain.labels()));
    }
    Ok(tables)
}

/// The table corners `(A^n·1, B^n·1)` — i.e. `g(n,n)` and `g(n,0)` — by
/// repeated matrix–vector products, without building the table. Reported in
/// original state order.
pub fn corner_vectors(pair: &LiftedPair, n: usize) -> (Array1<f64>, Array1<f64>) {
    let mut all = Array1::ones(pair.size());
    let mut none = all.clone();
    for _ in 0..n {
        all = pair.a().dot(&all);
        none = pair.b().dot(&none);
    }
    (
        pair.order().restore_vector(&all),
        pair.order().restore_vector(&none),
    )
}
