//! Closed-form occupancy distribution for the two-state chain.
//!
//! With `P = [[1-p, p], [q, 1-q]]` and `U = {0}`, the distribution of the
//! occupancy count has an explicit form: a binomial when `p + q = 1`, and
//! otherwise an alternating sum in powers of `r = 1 - p - q`. The module also
//! carries the coefficient arrays the derivation runs through (`a`, `b`, `c`)
//! and the two identities that tie the start states together: the p/q swap
//! and the degree-one polynomial factor linking the generating functions.
//!
//! The alternating sums cancel terms far larger than the result (the terms
//! reach ~1e14 on a 50-step horizon while the probabilities stay below 1),
//! so they are evaluated internally in double-double arithmetic and only the
//! final value is rounded back to `f64`. [`TwoStateParams::cancellation_risk`]
//! flags the extreme regime where even that reserve starts to thin out, so
//! callers can warn or fall back to the recursion route.

use crate::chain::{StochasticMatrix, SubsetMask};
use crate::dd::Dd;
use crate::dp::OccupancyTable;
use crate::error::{Error, Result};
use ndarray::Array2;

/// Below this |r| the dedicated binomial branch is used; the general sum is
/// still valid there, the branch is just exact.
const BINOMIAL_BRANCH_EPS: f64 = 1e-14;

/// Parameters of the two-state chain: `p = Pr(0→1)`, `q = Pr(1→0)`,
/// `r = 1 - p - q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateParams {
    p: f64,
    q: f64,
    r: f64,
}

impl TwoStateParams {
    /// Both probabilities must lie in the open interval `(0, 1)`; boundary
    /// chains are served by the recursion route instead.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ParamOutOfRange { name: "p", value: p });
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::ParamOutOfRange { name: "q", value: q });
        }
        Ok(Self { p, q, r: 1.0 - p - q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// The relabeled chain: swaps the roles of `p` and `q`.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q,
            q: self.p,
            r: self.r,
        }
    }

    /// True when the chain degenerates to i.i.d. draws (`r = 0`), where the
    /// occupancy count is binomial and independent of the start state.
    pub fn is_binomial(&self) -> bool {
        self.r.abs() < BINOMIAL_BRANCH_EPS
    }

    /// Flags the regime (`|r| > 0.9` and `n > 40`) where the alternating sum
    /// cancels most aggressively and results should be taken with the looser
    /// closed-form tolerance. Conservative: the extended-precision evaluation
    /// usually has digits to spare well past this boundary.
    pub fn cancellation_risk(&self, n: usize) -> bool {
        self.r.abs() > 0.9 && n > 40
    }

    /// Reads the parameters off a validated 2-state chain.
    ///
    /// Returns the params plus a flag telling whether the states had to be
    /// relabeled (i.e. `U = {1}`, so results for start `i` come from the
    /// formulas for start `1-i`).
    pub fn from_chain(chain: &StochasticMatrix, subset: &SubsetMask) -> Result<(Self, bool)> {
        if chain.size() != 2 {
            return Err(Error::TwoStateOnly {
                states: chain.size(),
            });
        }
        subset.check_len(2)?;
        if subset.count() != 1 {
            return Err(Error::SingletonSubsetRequired {
                members: subset.count(),
            });
        }
        let e = chain.entries();
        if subset.contains(0) {
            Ok((Self::new(e[(0, 1)], e[(1, 0)])?, false))
        } else {
            Ok((Self::new(e[(1, 0)], e[(0, 1)])?, true))
        }
    }
}

/// Binomial coefficient by the multiplicative recurrence, in doubles.
///
/// Exact for the desk-scale arguments used here (products stay below 2^53
/// through n = 50); no log-gamma path.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 1..=k {
        c = c * (n - k + i) as f64 / i as f64;
    }
    c
}

fn check_range(n: usize, k: usize) -> Result<()> {
    if k > n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    Ok(())
}

/// `-(1 - p - q)`, carried to double-double so the sign-alternating powers
/// start from an exact base.
fn minus_r_dd(p: f64, q: f64) -> Dd {
    Dd::from_f64(p).add(Dd::from_f64(q)).sub(Dd::ONE)
}

/// `g_1(n,k)`: occupancy distribution started in state 1.
pub fn g1_closed(params: &TwoStateParams, n: usize, k: usize) -> Result<f64> {
    check_range(n, k)?;
    let (p, q) = (params.p, params.q);
    if params.is_binomial() {
        return Ok(binomial(n, k) * q.powi(k as i32) * p.powi((n - k) as i32));
    }
    if k == 0 {
        return Ok((1.0 - q).powi(n as i32));
    }
    let one_minus_p = Dd::one_minus(p);
    let stay = one_minus_p.mul(Dd::one_minus(q));
    let minus_r = minus_r_dd(p, q);
    let mut sum = Dd::ZERO;
    for j in 0..=k.min(n - k) {
        let weight = Dd::ONE.sub(
            Dd::from_f64(j as f64)
                .div(Dd::from_f64(k as f64))
                .mul(Dd::from_f64(p)),
        );
        let term = Dd::from_f64(binomial(k, j))
            .mul(Dd::from_f64(binomial(n - j, n - k - j)))
            .mul(weight)
            .mul(stay.powi((n - k - j) as i32))
            .mul(minus_r.powi(j as i32));
        sum = sum.add(term);
    }
    Ok(Dd::from_f64(q)
        .mul(one_minus_p.powi(2 * k as i32 - 1 - n as i32))
        .mul(sum)
        .to_f64())
}

/// `g_0(n,k)`: occupancy distribution started in state 0 (the member of `U`).
pub fn g0_closed(params: &TwoStateParams, n: usize, k: usize) -> Result<f64> {
    check_range(n, k)?;
    let (p, q) = (params.p, params.q);
    if params.is_binomial() {
        return Ok(binomial(n, k) * q.powi(k as i32) * p.powi((n - k) as i32));
    }
    if k == n {
        return Ok((1.0 - p).powi(n as i32));
    }
    let one_minus_q = Dd::one_minus(q);
    let stay = one_minus_q.mul(Dd::one_minus(p));
    let minus_r = minus_r_dd(p, q);
    let mut sum = Dd::ZERO;
    for j in 0..=k.min(n - k) {
        let weight = Dd::ONE.sub(
            Dd::from_f64(j as f64)
                .div(Dd::from_f64((n - k) as f64))
                .mul(Dd::from_f64(q)),
        );
        let term = Dd::from_f64(binomial(n - k, j))
            .mul(Dd::from_f64(binomial(n - j, k - j)))
            .mul(weight)
            .mul(stay.powi((k - j) as i32))
            .mul(minus_r.powi(j as i32));
        sum = sum.add(term);
    }
    Ok(Dd::from_f64(p)
        .mul(one_minus_q.powi(n as i32 - (2 * k as i32 + 1)))
        .mul(sum)
        .to_f64())
}

/// `g_0` obtained from `g_1` by relabeling: the occupancy of state 1 over
/// `n` steps is `n - N_n`, so swapping `p` with `q` and `k` with `n-k` in the
/// start-1 formula reproduces the start-0 one.
pub fn swap_symmetry(params: &TwoStateParams, n: usize, k: usize) -> Result<f64> {
    check_range(n, k)?;
    g1_closed(&params.swapped(), n, n - k)
}

/// The coefficient arrays from the derivation of the closed form.
///
/// `a` are the coefficients of `(1-rt)(1-p-rt)^{k-1}`, `b` those of
/// `q (1-(1-q)t)^{-(k+1)}`, and `c` their convolution, so that
/// `c[i] = g_1(i+k, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofCoefficients {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

/// Expands the three arrays for a given `k ≥ 1` up to order `t_order`.
///
/// `a` is evaluated through the split form `binom(k,i) - p·binom(k-1,i-1)`,
/// deliberately a different arithmetic path than the factored
/// `(1 - (i/k)p)` used by [`g1_closed`], so the two can cross-check. The
/// convolution runs in double-double like the closed sums; the exposed
/// arrays are the rounded results.
pub fn proof_coefficients(
    params: &TwoStateParams,
    k: usize,
    t_order: usize,
) -> ProofCoefficients {
    assert!(k >= 1, "the coefficient arrays need k >= 1");
    let (p, q) = (params.p, params.q);
    let one_minus_p = Dd::one_minus(p);
    let one_minus_q = Dd::one_minus(q);
    let minus_r = minus_r_dd(p, q);
    let a_dd: Vec<Dd> = (0..=k)
        .map(|i| {
            let shifted = if i == 0 { 0.0 } else { binomial(k - 1, i - 1) };
            Dd::from_f64(binomial(k, i))
                .sub(Dd::from_f64(p).mul(Dd::from_f64(shifted)))
                .mul(one_minus_p.powi(k as i32 - 1 - i as i32))
                .mul(minus_r.powi(i as i32))
        })
        .collect();
    let b_dd: Vec<Dd> = (0..=t_order)
        .map(|i| {
            Dd::from_f64(binomial(k + i, i))
                .mul(Dd::from_f64(q))
                .mul(one_minus_q.powi(i as i32))
        })
        .collect();
    let c: Vec<f64> = (0..=t_order)
        .map(|i| {
            (0..=i.min(k))
                .fold(Dd::ZERO, |acc, j| acc.add(a_dd[j].mul(b_dd[i - j])))
                .to_f64()
        })
        .collect();
    ProofCoefficients {
        a: a_dd.iter().map(|d| d.to_f64()).collect(),
        b: b_dd.iter().map(|d| d.to_f64()).collect(),
        c,
    }
}

/// Coefficients of `G_0(t,k)` derived from the `G_1` sequence.
///
/// For `k ≥ 1` the generating functions differ by the exact polynomial
/// factor `(1-p-rt)/q`. At `k = 0` that factor does not apply (the `k = 0`
/// generating functions differ by `(1-rt)` instead), so the `k = 0` case is
/// produced from that relation; both cases return the true `g_0(m+k, k)`
/// sequence. Coefficient `m` of the result equals `g_0(m+k, k)`.
pub fn g0_from_g1_series(params: &TwoStateParams, k: usize, t_order: usize) -> Vec<f64> {
    let (p, q, r) = (params.p, params.q, params.r);
    let g1: Vec<f64> = (0..=t_order)
        .map(|m| g1_closed(params, m + k, k).expect("k <= m + k"))
        .collect();
    (0..=t_order)
        .map(|m| {
            let lower = if m >= 1 { r * g1[m - 1] } else { 0.0 };
            if k == 0 {
                g1[m] - lower
            } else {
                ((1.0 - p) * g1[m] - lower) / q
            }
        })
        .collect()
}

/// Full `g_i(n,k)` table from the closed forms, shaped like the recursion
/// route's output; `U` may be either singleton.
pub fn closed_table(
    chain: &StochasticMatrix,
    subset: &SubsetMask,
    n: usize,
) -> Result<OccupancyTable> {
    let (params, relabeled) = TwoStateParams::from_chain(chain, subset)?;
    let mut values = Array2::zeros((2, n + 1));
    for k in 0..=n {
        let g0 = g0_closed(&params, n, k)?;
        let g1 = g1_closed(&params, n, k)?;
        let (row0, row1) = if relabeled { (g1, g0) } else { (g0, g1) };
        values[(0, k)] = row0;
        values[(1, k)] = row1;
    }
    Ok(OccupancyTable::from_parts(n, values, chain.labels().to_vec()))
}
