//! Randomized invariants: normalization, oracle equivalence, series ring
//! laws, and route agreement on arbitrary chains.

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use occupancy_core::dp::{corner_vectors, occupancy_distribution};
use occupancy_core::oracle::enumerate_paths;
use occupancy_core::series::{gf_coefficients, series_add, series_mul, MatrixSeries};
use occupancy_core::{StochasticMatrix, SubsetMask};

fn rows_from(flat: &[f64], size: usize) -> Vec<Vec<f64>> {
    flat.chunks(size)
        .map(|row| {
            // zero out small entries to exercise sparse transitions, keep the
            // row alive with a self-loop if everything vanished
            let mut row: Vec<f64> = row.iter().map(|&x| if x < 0.3 { 0.0 } else { x }).collect();
            if row.iter().sum::<f64>() == 0.0 {
                row[0] = 1.0;
            }
            let sum: f64 = row.iter().sum();
            row.iter_mut().for_each(|x| *x /= sum);
            row
        })
        .collect()
}

prop_compose! {
    fn chain_mask(max_size: usize)
        (size in 1..=max_size)
        (flat in prop::collection::vec(0.0f64..1.0, size * size),
         members in prop::collection::vec(any::<bool>(), size),
         size in Just(size))
        -> (StochasticMatrix, SubsetMask)
    {
        let m = StochasticMatrix::from_rows(&rows_from(&flat, size)).expect("rows normalized");
        (m, SubsetMask::new(members))
    }
}

prop_compose! {
    fn series_triple()
        (dim in 1usize..=3, order in 0usize..=5)
        (x in prop::collection::vec(0.0f64..1.0, (order + 1) * dim * dim),
         y in prop::collection::vec(0.0f64..1.0, (order + 1) * dim * dim),
         z in prop::collection::vec(0.0f64..1.0, (order + 1) * dim * dim),
         dim in Just(dim), order in Just(order))
        -> (MatrixSeries, MatrixSeries, MatrixSeries)
    {
        // entries scaled by 1/dim so every product coefficient stays O(1)
        let build = |flat: Vec<f64>| {
            MatrixSeries::from_coeffs(
                (0..=order)
                    .map(|m| {
                        ndarray::Array2::from_shape_fn((dim, dim), |(i, j)| {
                            flat[m * dim * dim + i * dim + j] / dim as f64
                        })
                    })
                    .collect(),
            )
        };
        (build(x), build(y), build(z))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rows_sum_to_one((m, mask) in chain_mask(8), n in 1usize..=100) {
        let table = occupancy_distribution(&m, &mask, n).unwrap();
        for i in 0..m.size() {
            let sum: f64 = table.pmf(i).iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12, "row {i} sums to {sum}");
        }
    }

    #[test]
    fn table_edges_are_matrix_powers((m, mask) in chain_mask(8), n in 1usize..=60) {
        let table = occupancy_distribution(&m, &mask, n).unwrap();
        let pair = m.decompose(&mask).unwrap().lift();
        let (all, none) = corner_vectors(&pair, n);
        for i in 0..m.size() {
            prop_assert!((table.value(i, n) - all[i]).abs() <= 1e-12);
            prop_assert!((table.value(i, 0) - none[i]).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dp_matches_exhaustive_enumeration((m, mask) in chain_mask(4), n in 1usize..=10) {
        let table = occupancy_distribution(&m, &mask, n).unwrap();
        for start in 0..m.size() {
            let pmf = enumerate_paths(&m, &mask, n, start).unwrap();
            for k in 0..=n {
                prop_assert!(
                    (pmf[k] - table.value(start, k)).abs() <= 1e-12,
                    "start {start}, k {k}: {} vs {}", pmf[k], table.value(start, k)
                );
            }
        }
    }

    #[test]
    fn gf_coefficients_equal_dp_layers((m, mask) in chain_mask(6), k in 0usize..=10, t in 0usize..=30) {
        let g = gf_coefficients(&m, &mask, k, t).unwrap();
        for m_idx in (0..=t).step_by(5.max(t / 4 + 1)) {
            let table = occupancy_distribution(&m, &mask, m_idx + k).unwrap();
            for i in 0..m.size() {
                prop_assert!((g.coeff(m_idx)[i] - table.value(i, k)).abs() <= 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncated_products_associate((x, y, z) in series_triple()) {
        let left = series_mul(&series_mul(&x, &y).unwrap(), &z).unwrap();
        let right = series_mul(&x, &series_mul(&y, &z).unwrap()).unwrap();
        for m in 0..=left.order() {
            for ((i, j), l) in left.coeff(m).indexed_iter() {
                prop_assert!((l - right.coeff(m)[(i, j)]).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn truncated_products_distribute((x, y, z) in series_triple()) {
        let left = series_mul(&x, &series_add(&y, &z).unwrap()).unwrap();
        let right = series_add(
            &series_mul(&x, &y).unwrap(),
            &series_mul(&x, &z).unwrap(),
        )
        .unwrap();
        for m in 0..=left.order() {
            for ((i, j), l) in left.coeff(m).indexed_iter() {
                prop_assert!((l - right.coeff(m)[(i, j)]).abs() <= 1e-15);
            }
        }
    }
}

#[test]
fn degenerate_masks_are_exact_point_masses() {
    let m = StochasticMatrix::from_rows(&[
        vec![0.5, 0.25, 0.25],
        vec![0.9, 0.05, 0.05],
        vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    ])
    .unwrap();
    for n in [1, 4, 33] {
        let empty = occupancy_distribution(&m, &SubsetMask::new(vec![false; 3]), n).unwrap();
        let full = occupancy_distribution(&m, &SubsetMask::new(vec![true; 3]), n).unwrap();
        for i in 0..3 {
            assert_eq!(empty.value(i, 0), 1.0);
            assert_eq!(full.value(i, n), 1.0);
        }
    }
}

#[test]
fn renormalized_rows_still_normalize_the_table() {
    // decimal rounding in the input: rows off by < 1e-9 get rescaled
    let m = StochasticMatrix::from_rows(&[
        vec![0.333333333, 0.333333333, 0.333333334],
        vec![0.1000000002, 0.5, 0.3999999999],
        vec![0.25, 0.25, 0.5000000001],
    ])
    .unwrap();
    let mask = SubsetMask::from_indices(3, &[0, 2]).unwrap();
    let table = occupancy_distribution(&m, &mask, 60).unwrap();
    for i in 0..3 {
        assert_abs_diff_eq!(table.pmf(i).iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }
}
