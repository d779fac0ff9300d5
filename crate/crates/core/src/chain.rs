//! Transition matrices, state subsets, and the block machinery built on them.
//!
//! A chain is described by a row-stochastic matrix `P` and a subset `U` of its
//! states. Splitting the states into `U` and its complement decomposes `P`
//! into four blocks, and lifting the blocks back to full size yields the pair
//! `A` (transitions *into* `U`) and `B` (transitions into the complement) with
//! `A + B = P`. Every other module consumes these pieces.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Row sums within this distance of 1 are silently renormalized.
pub const DEFAULT_ROW_SUM_TOLERANCE: f64 = 1e-9;

/// A validated row-stochastic transition matrix with state labels.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    entries: Array2<f64>,
    labels: Vec<String>,
}

impl StochasticMatrix {
    /// Validates a square probability array and returns the matrix.
    ///
    /// Rows whose sums deviate from 1 by at most `tolerance` are renormalized;
    /// larger deviations are an error. Labels default to `"0"`, `"1"`, ….
    pub fn validate(entries: Array2<f64>, tolerance: f64) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::NonSquare {
                rows,
                row: 0,
                cols,
            });
        }
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = entries;
        for i in 0..rows {
            let mut sum = 0.0;
            for j in 0..cols {
                let v = entries[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFiniteEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                if v < 0.0 {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                sum += v;
            }
            if (sum - 1.0).abs() > tolerance {
                return Err(Error::RowSumOutOfTolerance {
                    row: i,
                    sum,
                    tolerance,
                });
            }
            if sum != 1.0 {
                for j in 0..cols {
                    entries[(i, j)] /= sum;
                }
            }
        }
        let labels = (0..rows).map(|i| i.to_string()).collect();
        Ok(Self { entries, labels })
    }

    /// Builds a matrix from row vectors using [`DEFAULT_ROW_SUM_TOLERANCE`].
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    row: i,
                    cols: row.len(),
                });
            }
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let entries = Array2::from_shape_vec((n, n), flat).expect("shape checked above");
        Self::validate(entries, DEFAULT_ROW_SUM_TOLERANCE)
    }

    /// Replaces the default labels.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size() {
            return Err(Error::LabelCountMismatch {
                labels: labels.len(),
                states: self.size(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    /// Number of states.
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// The validated (possibly renormalized) entries.
    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    /// State labels, in original order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Resolves a label to its state index.
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Splits the matrix into its four `U`-blocks.
    pub fn decompose(&self, subset: &SubsetMask) -> Result<BlockDecomposition> {
        subset.check_len(self.size())?;
        let order = StatePermutation::u_first(subset);
        let u = subset.count();
        let c = self.size() - u;
        let block = |row_base: usize, col_base: usize, rows: usize, cols: usize| {
            Array2::from_shape_fn((rows, cols), |(i, j)| {
                self.entries[(
                    order.to_original[row_base + i],
                    order.to_original[col_base + j],
                )]
            })
        };
        Ok(BlockDecomposition {
            puu: block(0, 0, u, u),
            puuc: block(0, u, u, c),
            pucu: block(u, 0, c, u),
            pucuc: block(u, u, c, c),
            order,
        })
    }
}

/// A boolean membership mask selecting the subset `U` of states.
///
/// `U = ∅` and `U = S` are both legal; they force the occupancy count to be
/// identically 0 or identically `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetMask {
    members: Vec<bool>,
}

impl SubsetMask {
    pub fn new(members: Vec<bool>) -> Self {
        Self { members }
    }

    /// Builds a mask of `len` states containing exactly `indices`.
    pub fn from_indices(len: usize, indices: &[usize]) -> Result<Self> {
        let mut members = vec![false; len];
        for &i in indices {
            if i >= len {
                return Err(Error::StateOutOfRange {
                    index: i,
                    states: len,
                });
            }
            members[i] = true;
        }
        Ok(Self { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of states in `U`.
    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn contains(&self, state: usize) -> bool {
        self.members.get(state).copied().unwrap_or(false)
    }

    /// Indices of the member states, ascending.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.members[i]).collect()
    }

    pub fn complement(&self) -> Self {
        Self {
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    pub(crate) fn check_len(&self, states: usize) -> Result<()> {
        if self.len() != states {
            return Err(Error::MaskLengthMismatch {
                mask_len: self.len(),
                states,
            });
        }
        Ok(())
    }
}

/// The state reordering that lists `U` first, then its complement.
///
/// Relative order is preserved within each group, so the permutation is
/// stable and invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatePermutation {
    /// `to_original[j]` is the original index of permuted position `j`.
    to_original: Vec<usize>,
}

impl StatePermutation {
    fn u_first(subset: &SubsetMask) -> Self {
        let mut to_original = subset.indices();
        to_original.extend(subset.complement().indices());
        Self { to_original }
    }

    pub fn len(&self) -> usize {
        self.to_original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_original.is_empty()
    }

    /// Original index of permuted position `j`.
    pub fn original_index(&self, j: usize) -> usize {
        self.to_original[j]
    }

    /// Reorders an original-order vector into permuted (U-first) order.
    pub fn permute_vector(&self, original: &Array1<f64>) -> Array1<f64> {
        Array1::from_shape_fn(self.len(), |j| original[self.to_original[j]])
    }

    /// Restores a permuted-order vector to original state order.
    pub fn restore_vector(&self, permuted: &Array1<f64>) -> Array1<f64> {
        let mut out = Array1::zeros(self.len());
        for (j, &orig) in self.to_original.iter().enumerate() {
            out[orig] = permuted[j];
        }
        out
    }

    /// Restores a permuted-order square matrix to original state order.
    pub fn restore_matrix(&self, permuted: &Array2<f64>) -> Array2<f64> {
        let n = self.len();
        let mut out = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                out[(self.to_original[i], self.to_original[j])] = permuted[(i, j)];
            }
        }
        out
    }
}

/// The four blocks of `P` under the U-first ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    puu: Array2<f64>,
    puuc: Array2<f64>,
    pucu: Array2<f64>,
    pucuc: Array2<f64>,
    order: StatePermutation,
}

impl BlockDecomposition {
    pub fn puu(&self) -> &Array2<f64> {
        &self.puu
    }

    pub fn puuc(&self) -> &Array2<f64> {
        &self.puuc
    }

    pub fn pucu(&self) -> &Array2<f64> {
        &self.pucu
    }

    pub fn pucuc(&self) -> &Array2<f64> {
        &self.pucuc
    }

    pub fn order(&self) -> &StatePermutation {
        &self.order
    }

    pub fn u_size(&self) -> usize {
        self.puu.nrows()
    }

    pub fn complement_size(&self) -> usize {
        self.pucuc.nrows()
    }

    pub fn size(&self) -> usize {
        self.u_size() + self.complement_size()
    }

    /// Reassembles the original matrix from the blocks, undoing the
    /// permutation. Exact: entries are moved, never recomputed.
    pub fn reassemble(&self) -> Array2<f64> {
        let u = self.u_size();
        let n = self.size();
        let permuted = Array2::from_shape_fn((n, n), |(i, j)| match (i < u, j < u) {
            (true, true) => self.puu[(i, j)],
            (true, false) => self.puuc[(i, j - u)],
            (false, true) => self.pucu[(i - u, j)],
            (false, false) => self.pucuc[(i - u, j - u)],
        });
        self.order.restore_matrix(&permuted)
    }

    /// Lifts the blocks to the full-size pair `A`, `B` with `A + B = P`
    /// (in permuted order).
    pub fn lift(&self) -> LiftedPair {
        let u = self.u_size();
        let n = self.size();
        let a = Array2::from_shape_fn((n, n), |(i, j)| {
            if j >= u {
                0.0
            } else if i < u {
                self.puu[(i, j)]
            } else {
                self.pucu[(i - u, j)]
            }
        });
        let b = Array2::from_shape_fn((n, n), |(i, j)| {
            if j < u {
                0.0
            } else if i < u {
                self.puuc[(i, j - u)]
            } else {
                self.pucuc[(i - u, j - u)]
            }
        });
        LiftedPair {
            a,
            b,
            u_size: u,
            order: self.order.clone(),
        }
    }
}

/// Full-size matrices `A` (columns into `U`) and `B` (columns into the
/// complement), in the permuted U-first ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedPair {
    a: Array2<f64>,
    b: Array2<f64>,
    u_size: usize,
    order: StatePermutation,
}

impl LiftedPair {
    pub fn a(&self) -> &Array2<f64> {
        &self.a
    }

    pub fn b(&self) -> &Array2<f64> {
        &self.b
    }

    pub fn size(&self) -> usize {
        self.a.nrows()
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }

    pub fn order(&self) -> &StatePermutation {
        &self.order
    }

    /// `A + B`, i.e. the permuted transition matrix.
    pub fn sum(&self) -> Array2<f64> {
        &self.a + &self.b
    }
}
