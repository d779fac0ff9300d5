use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("matrix is not square: {rows} rows, but row {row} has {cols} entries")]
    NonSquare { rows: usize, row: usize, cols: usize },

    #[error("matrix must have at least one state")]
    EmptyMatrix,

    #[error("entry ({row},{col}) = {value} is not finite")]
    NonFiniteEntry { row: usize, col: usize, value: f64 },

    #[error("entry ({row},{col}) = {value} is negative")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("row {row} sums to {sum}, outside tolerance {tolerance} of 1")]
    RowSumOutOfTolerance {
        row: usize,
        sum: f64,
        tolerance: f64,
    },

    #[error("{labels} labels provided for {states} states")]
    LabelCountMismatch { labels: usize, states: usize },

    #[error("subset mask has length {mask_len}, but the chain has {states} states")]
    MaskLengthMismatch { mask_len: usize, states: usize },

    #[error("state index {index} out of range for {states} states")]
    StateOutOfRange { index: usize, states: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("block {side} is empty; the reduced route needs both U and its complement nonempty")]
    EmptyBlock { side: &'static str },

    #[error("occupancy count k = {k} out of range for horizon n = {n}")]
    IndexOutOfRange { k: usize, n: usize },

    #[error("{name} = {value} outside the open interval (0, 1)")]
    ParamOutOfRange { name: &'static str, value: f64 },

    #[error("closed form is only available for 2-state chains (got {states} states)")]
    TwoStateOnly { states: usize },

    #[error("closed form needs U to be a single state (got |U| = {members})")]
    SingletonSubsetRequired { members: usize },

    #[error("{states}^{horizon} paths exceed the enumeration limit of {limit}")]
    TooManyPaths {
        states: usize,
        horizon: usize,
        limit: u64,
    },

    #[error("simulation needs at least one sample")]
    ZeroSamples,
}

pub type Result<T> = std::result::Result<T, Error>;
