//! Probability generating function of the occupancy count, its mean, and
//! expected running costs.
//!
//! `H(n,z) = E[z^{N_n} | X_0 = ·]` satisfies `H(n,z) = (B + Az) H(n-1,z)`
//! starting from the all-ones vector, i.e. `H(n,z) = (B + Az)^n · 1`.
//! Because `A` and `B` do not commute, moments are not taken by
//! differentiating the matrix power; the mean follows its own recursion
//! `e(n) = P e(n-1) + A·1`, and higher moments come straight off the
//! occupancy table.

use ndarray::Array1;

use crate::chain::{LiftedPair, StochasticMatrix, SubsetMask};
use crate::error::{Error, Result};

/// `H_i(n,z)` for all start states, in original state order.
///
/// `H(n,1)` is the all-ones vector, and for `z ∈ [0,1]` every entry lies in
/// `[0,1]`. Evaluation outside `[0,1]` is permitted — `H` is a polynomial in
/// `z` — the probability bounds just no longer apply.
#[derive(Debug, Clone, PartialEq)]
pub struct PgfEvaluation {
    horizon: usize,
    z: f64,
    values: Array1<f64>,
}

impl PgfEvaluation {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn value(&self, state: usize) -> f64 {
        self.values[state]
    }
}

/// A running cost: `f(i)` is charged each time the chain steps into state
/// `i`. The indicator of `U` recovers the occupancy count.
#[derive(Debug, Clone, PartialEq)]
pub struct CostFunction {
    values: Array1<f64>,
}

impl CostFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry {
                    row: i,
                    col: 0,
                    value: v,
                });
            }
        }
        Ok(Self {
            values: Array1::from_vec(values),
        })
    }

    /// 1 on `U`, 0 elsewhere.
    pub fn indicator(subset: &SubsetMask) -> Self {
        Self {
            values: Array1::from_shape_fn(subset.len(), |i| {
                if subset.contains(i) {
                    1.0
                } else {
                    0.0
                }
            }),
        }
    }

    pub fn constant(value: f64, len: usize) -> Self {
        Self {
            values: Array1::from_elem(len, value),
        }
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Evaluates the pgf pointwise by iterating `v ← (B + Az) v` from the
/// all-ones vector; `n = 0` returns all ones.
pub fn pgf_eval(pair: &LiftedPair, n: usize, z: f64) -> PgfEvaluation {
    let step = pair.b() + &(pair.a() * z);
    let mut v = Array1::ones(pair.size());
    for _ in 0..n {
        v = step.dot(&v);
    }
    PgfEvaluation {
        horizon: n,
        z,
        values: pair.order().restore_vector(&v),
    }
}

/// Expected occupancy `e(n) = (I + P + … + P^{n-1}) A·1`, accumulated as
/// `e(m) = P e(m-1) + A·1` in `O(n |S|²)`. Original state order; `n = 0`
/// gives the zero vector.
pub fn expected_occupancy(
    chain: &StochasticMatrix,
    pair: &LiftedPair,
    n: usize,
) -> Array1<f64> {
    assert_eq!(
        chain.size(),
        pair.size(),
        "chain and lifted pair must describe the same state space"
    );
    let visit = pair
        .order()
        .restore_vector(&pair.a().dot(&Array1::ones(pair.size())));
    if n == 0 {
        return Array1::zeros(chain.size());
    }
    let mut e = visit.clone();
    for _ in 2..=n {
        e = chain.entries().dot(&e) + &visit;
    }
    e
}

/// Expected total cost `E[F_n | X_0 = i]` with `F_n = Σ_{m=1..n} f(X_m)`,
/// i.e. `Σ_{m=1..n} (P^m f)_i`. With `f` the indicator of `U` this equals
/// [`expected_occupancy`].
pub fn expected_cost(
    chain: &StochasticMatrix,
    cost: &CostFunction,
    n: usize,
) -> Result<Array1<f64>> {
    if cost.len() != chain.size() {
        return Err(Error::DimensionMismatch {
            left: cost.len(),
            right: chain.size(),
        });
    }
    let mut propagated = cost.values().clone();
    let mut total = Array1::zeros(chain.size());
    for _ in 1..=n {
        propagated = chain.entries().dot(&propagated);
        total = total + &propagated;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::occupancy_distribution;
    use approx::assert_abs_diff_eq;

    fn two_state() -> (StochasticMatrix, SubsetMask, LiftedPair) {
        let m = StochasticMatrix::from_rows(&[vec![0.8, 0.2], vec![0.4, 0.6]]).unwrap();
        let mask = SubsetMask::from_indices(2, &[0]).unwrap();
        let pair = m.decompose(&mask).unwrap().lift();
        (m, mask, pair)
    }

    fn p3() -> (StochasticMatrix, SubsetMask, LiftedPair) {
        let m = StochasticMatrix::from_rows(&[
            vec![0.5, 0.3, 0.2],
            vec![0.1, 0.6, 0.3],
            vec![0.4, 0.4, 0.2],
        ])
        .unwrap();
        let mask = SubsetMask::from_indices(3, &[1, 2]).unwrap();
        let pair = m.decompose(&mask).unwrap().lift();
        (m, mask, pair)
    }

    #[test]
    fn pgf_at_one_is_normalization() {
        let (_, _, pair) = p3();
        for n in [0, 1, 5, 20] {
            let h = pgf_eval(&pair, n, 1.0);
            for i in 0..3 {
                assert_abs_diff_eq!(h.value(i), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn pgf_one_step_two_state() {
        let (_, _, pair) = two_state();
        let h = pgf_eval(&pair, 1, 0.5);
        assert_abs_diff_eq!(h.value(0), 0.2 + 0.8 * 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(h.value(1), 0.6 + 0.4 * 0.5, epsilon = 1e-15);
    }

    #[test]
    fn pgf_at_zero_is_the_no_visit_probability() {
        let (m, mask, pair) = p3();
        for n in [1, 3, 8] {
            let h = pgf_eval(&pair, n, 0.0);
            let t = occupancy_distribution(&m, &mask, n).unwrap();
            for i in 0..3 {
                assert_abs_diff_eq!(h.value(i), t.value(i, 0), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn pgf_matches_the_table_polynomial() {
        let (m, mask, pair) = p3();
        for n in [1, 4, 12] {
            let t = occupancy_distribution(&m, &mask, n).unwrap();
            for z in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let h = pgf_eval(&pair, n, z);
                for i in 0..3 {
                    let direct: f64 = (0..=n)
                        .map(|k| t.value(i, k) * z.powi(k as i32))
                        .sum();
                    assert_abs_diff_eq!(h.value(i), direct, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn expected_occupancy_base_and_two_step() {
        let (m, _, pair) = two_state();
        let e1 = expected_occupancy(&m, &pair, 1);
        assert_abs_diff_eq!(e1[0], 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(e1[1], 0.4, epsilon = 1e-15);
        let e2 = expected_occupancy(&m, &pair, 2);
        assert_abs_diff_eq!(e2[0], 1.52, epsilon = 1e-12);
        assert_abs_diff_eq!(e2[1], 0.96, epsilon = 1e-12);
    }

    #[test]
    fn full_subset_spends_every_step_inside() {
        let m = StochasticMatrix::from_rows(&[vec![0.8, 0.2], vec![0.4, 0.6]]).unwrap();
        let mask = SubsetMask::new(vec![true, true]);
        let pair = m.decompose(&mask).unwrap().lift();
        let e = expected_occupancy(&m, &pair, 9);
        for i in 0..2 {
            assert_abs_diff_eq!(e[i], 9.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn mean_bounds_and_table_identity() {
        let (m, mask, pair) = p3();
        for n in [1, 7, 30] {
            let e = expected_occupancy(&m, &pair, n);
            let t = occupancy_distribution(&m, &mask, n).unwrap();
            for i in 0..3 {
                assert!(e[i] >= 0.0 && e[i] <= n as f64);
                assert_abs_diff_eq!(e[i], t.mean(i), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn constant_cost_accumulates_to_n() {
        let (m, _, _) = p3();
        let f = CostFunction::constant(1.0, 3);
        let total = expected_cost(&m, &f, 13).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(total[i], 13.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn indicator_cost_is_expected_occupancy() {
        let (m, mask, pair) = p3();
        let f = CostFunction::indicator(&mask);
        for n in [1, 2, 17] {
            let via_cost = expected_cost(&m, &f, n).unwrap();
            let direct = expected_occupancy(&m, &pair, n);
            for i in 0..3 {
                assert_abs_diff_eq!(via_cost[i], direct[i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn one_step_cost_is_a_row_average() {
        let (m, _, _) = two_state();
        let f = CostFunction::new(vec![2.0, 0.0]).unwrap();
        let total = expected_cost(&m, &f, 1).unwrap();
        assert_abs_diff_eq!(total[0], 1.6, epsilon = 1e-15);
        assert_abs_diff_eq!(total[1], 0.8, epsilon = 1e-15);
    }

    #[test]
    fn cost_dimension_and_finiteness_guards() {
        let (m, _, _) = two_state();
        let f = CostFunction::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            expected_cost(&m, &f, 2),
            Err(Error::DimensionMismatch { left: 3, right: 2 })
        ));
        assert!(matches!(
            CostFunction::new(vec![1.0, f64::INFINITY]),
            Err(Error::NonFiniteEntry { row: 1, .. })
        ));
    }
}
