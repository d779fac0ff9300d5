//! Truncated matrix power series and the generating-function route.
//!
//! `G(t,k)` collects the occupancy probabilities along its coefficients:
//! coefficient `m` of `G(t,k)` equals `g(m+k, k)`. The route evaluates
//! `G(t,k) = [(I-Bt)^{-1} A]^k (I-Bt)^{-1}·1` with the resolvent expanded as
//! the Neumann series `Σ B^m t^m`. Series are treated formally: only the
//! coefficients matter, so products truncate hard at the smaller order and
//! no convergence question arises.

use ndarray::{Array1, Array2};

use crate::chain::{BlockDecomposition, StochasticMatrix, SubsetMask};
use crate::dp::OccupancyTable;
use crate::error::{Error, Result};

/// A matrix-valued polynomial in `t`, truncated at `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSeries {
    /// `coeffs[m]` is the coefficient of `t^m`; all square of one dimension.
    coeffs: Vec<Array2<f64>>,
}

impl MatrixSeries {
    /// Builds a series from explicit coefficients.
    ///
    /// Panics if `coeffs` is empty or the coefficients are not square
    /// matrices of one shared dimension.
    pub fn from_coeffs(coeffs: Vec<Array2<f64>>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        let dim = coeffs[0].nrows();
        for c in &coeffs {
            assert_eq!(c.dim(), (dim, dim), "coefficients must share one dimension");
        }
        Self { coeffs }
    }

    /// The series `I + 0·t + … + 0·t^order`.
    pub fn identity(dim: usize, order: usize) -> Self {
        let mut coeffs = vec![Array2::zeros((dim, dim)); order + 1];
        coeffs[0] = Array2::eye(dim);
        Self { coeffs }
    }

    /// Truncation order `T`; the series has `T + 1` coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].nrows()
    }

    /// Coefficient of `t^m`.
    pub fn coeff(&self, m: usize) -> &Array2<f64> {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[Array2<f64>] {
        &self.coeffs
    }

    /// Drops coefficients above `order`.
    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }
}

/// A vector-valued polynomial in `t`; coefficient `m`, entry `i` is the
/// coefficient of `t^m` in `G_i(t,k)` for whichever `k` it was built for.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSeries {
    coeffs: Vec<Array1<f64>>,
}

impl VectorSeries {
    pub fn from_coeffs(coeffs: Vec<Array1<f64>>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        let dim = coeffs[0].len();
        for c in &coeffs {
            assert_eq!(c.len(), dim, "coefficients must share one dimension");
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].len()
    }

    /// Coefficient of `t^m`.
    pub fn coeff(&self, m: usize) -> &Array1<f64> {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[Array1<f64>] {
        &self.coeffs
    }

    fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }
}

/// Truncated sum; the result order is the smaller operand order.
pub fn series_add(x: &MatrixSeries, y: &MatrixSeries) -> Result<MatrixSeries> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let order = x.order().min(y.order());
    let coeffs = (0..=order).map(|m| &x.coeffs[m] + &y.coeffs[m]).collect();
    Ok(MatrixSeries { coeffs })
}

/// Truncated Cauchy product; the result order is the smaller operand order.
///
/// Naive `O(T²)` convolution of matrix products; plenty at desk scale.
pub fn series_mul(x: &MatrixSeries, y: &MatrixSeries) -> Result<MatrixSeries> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let order = x.order().min(y.order());
    let dim = x.dim();
    let coeffs = (0..=order)
        .map(|m| {
            let mut c = Array2::zeros((dim, dim));
            for j in 0..=m {
                c = c + x.coeffs[j].dot(&y.coeffs[m - j]);
            }
            c
        })
        .collect();
    Ok(MatrixSeries { coeffs })
}

/// Truncated product of a matrix series with a vector series.
pub fn series_mul_vector(x: &MatrixSeries, v: &VectorSeries) -> Result<VectorSeries> {
    if x.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: v.dim(),
        });
    }
    let order = x.order().min(v.order());
    let coeffs = (0..=order)
        .map(|m| {
            let mut c = Array1::zeros(x.dim());
            for j in 0..=m {
                c = c + x.coeffs[j].dot(&v.coeffs[m - j]);
            }
            c
        })
        .collect();
    Ok(VectorSeries { coeffs })
}

/// Neumann expansion `Σ_{m=0}^{T} b^m t^m`, which agrees with `(I - bt)^{-1}`
/// up to order `T`.
pub fn resolvent(b: &Array2<f64>, order: usize) -> MatrixSeries {
    let dim = b.nrows();
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Array2::eye(dim));
    for m in 1..=order {
        let next = coeffs[m - 1].dot(b);
        coeffs.push(next);
    }
    MatrixSeries { coeffs }
}

/// The first `order + 1` coefficients of `G(t,k)`, in original state order.
///
/// Coefficient `m` equals `g(m+k, k)`. For `k = 0` this is the resolvent
/// applied to the all-ones vector.
pub fn gf_coefficients(
    chain: &StochasticMatrix,
    subset: &SubsetMask,
    k: usize,
    order: usize,
) -> Result<VectorSeries> {
    let pair = chain.decompose(subset)?.lift();
    let r = resolvent(pair.b(), order);
    let mut g = VectorSeries {
        coeffs: r.coeffs.iter().map(|c| c.dot(&Array1::ones(pair.size()))).collect(),
    };
    for _ in 0..k {
        let applied = VectorSeries {
            coeffs: g.coeffs.iter().map(|c| pair.a().dot(c)).collect(),
        };
        g = series_mul_vector(&r, &applied)?;
    }
    let coeffs = g.coeffs.iter().map(|c| pair.order().restore_vector(c)).collect();
    Ok(VectorSeries { coeffs })
}

/// Convolution of rectangular coefficient lists; used inside the reduced
/// route, where the off-diagonal blocks are not square.
fn conv_matrix_vector(x: &[Array2<f64>], v: &[Array1<f64>]) -> Vec<Array1<f64>> {
    let order = x.len().min(v.len()) - 1;
    let rows = x[0].nrows();
    (0..=order)
        .map(|m| {
            let mut c = Array1::zeros(rows);
            for j in 0..=m {
                c = c + x[j].dot(&v[m - j]);
            }
            c
        })
        .collect()
}

/// `G(t,k)` via the reduced form that powers series only in the `|U|`-sized
/// block `V = P_UU + t P_UU^c (I - t P_U^cU^c)^{-1} P_U^cU`.
///
/// Requires `k ≥ 1` and both `U` and its complement nonempty; degenerate
/// subsets must go through [`gf_coefficients`] instead. Agrees with the full
/// lifted route coefficientwise.
pub fn vw_reduction(
    blocks: &BlockDecomposition,
    k: usize,
    order: usize,
) -> Result<VectorSeries> {
    if blocks.u_size() == 0 {
        return Err(Error::EmptyBlock { side: "U" });
    }
    if blocks.complement_size() == 0 {
        return Err(Error::EmptyBlock { side: "U^c" });
    }
    assert!(k >= 1, "vw_reduction needs k >= 1");
    let u = blocks.u_size();
    let c = blocks.complement_size();

    // Neumann coefficients of (I - t P_U^cU^c)^{-1}
    let mut s: Vec<Array2<f64>> = Vec::with_capacity(order + 1);
    s.push(Array2::eye(c));
    for m in 1..=order {
        let next = s[m - 1].dot(blocks.pucuc());
        s.push(next);
    }

    // V = P_UU + t P_UU^c S P_U^cU, a |U|-dimensional series
    let mut v_coeffs: Vec<Array2<f64>> = Vec::with_capacity(order + 1);
    v_coeffs.push(blocks.puu().clone());
    for m in 1..=order {
        v_coeffs.push(blocks.puuc().dot(&s[m - 1]).dot(blocks.pucu()));
    }
    let v = MatrixSeries { coeffs: v_coeffs };

    // W = S P_U^cU (|U^c| × |U|), and the U-rows of (I-Bt)^{-1}·1
    let w: Vec<Array2<f64>> = s.iter().map(|sm| sm.dot(blocks.pucu())).collect();
    let ones_c = Array1::ones(c);
    let mut g0u: Vec<Array1<f64>> = Vec::with_capacity(order + 1);
    g0u.push(Array1::ones(u));
    for m in 1..=order {
        g0u.push(blocks.puuc().dot(&s[m - 1].dot(&ones_c)));
    }
    let g0u = VectorSeries { coeffs: g0u };

    // V^{k-1}, then the two output blocks: V^k g0 and W V^{k-1} g0
    let mut v_pow = MatrixSeries::identity(u, order);
    for _ in 0..k - 1 {
        v_pow = series_mul(&v_pow, &v)?;
    }
    let reduced = series_mul_vector(&v_pow, &g0u)?;
    let top = series_mul_vector(&v, &reduced)?;
    let bottom = conv_matrix_vector(&w, &reduced.coeffs);

    let coeffs = (0..=order)
        .map(|m| {
            let mut permuted = Array1::zeros(u + c);
            for i in 0..u {
                permuted[i] = top.coeffs[m][i];
            }
            for i in 0..c {
                permuted[u + i] = bottom[m][i];
            }
            blocks.order().restore_vector(&permuted)
        })
        .collect();
    Ok(VectorSeries { coeffs })
}

/// Builds the full occupancy table at horizon `n` from the generating
/// function route, extracting coefficient `n-k` of `G(t,k)` for each `k`.
///
/// The truncation order shrinks as `k` grows (`T = n - k`), so no discarded
/// coefficients are ever computed.
pub fn gf_table(chain: &StochasticMatrix, subset: &SubsetMask, n: usize) -> Result<OccupancyTable> {
    let pair = chain.decompose(subset)?.lift();
    let r = resolvent(pair.b(), n);
    let mut g = VectorSeries {
        coeffs: r.coeffs.iter().map(|c| c.dot(&Array1::ones(pair.size()))).collect(),
    };
    let mut values = Array2::zeros((pair.size(), n + 1));
    for k in 0..=n {
        let col = pair.order().restore_vector(g.coeff(n - k));
        for i in 0..pair.size() {
            values[(i, k)] = col[i];
        }
        if k < n {
            let applied = VectorSeries {
                coeffs: g.coeffs.iter().map(|c| pair.a().dot(c)).collect(),
            };
            g = series_mul_vector(&r, &applied)?.truncate(n - k - 1);
        }
    }
    Ok(OccupancyTable::from_parts(n, values, chain.labels().to_vec()))
}
