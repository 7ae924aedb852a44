use thiserror::Error;

/// Errors raised by the workbench.
///
/// Indices carried by variants are 1-based, matching the usual
/// (row, column) labelling of patterns and moves.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid context: {0}")]
    Context(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at z = {0}")]
    Pole(String),

    #[error("accuracy error: {0}")]
    Accuracy(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid tableau at ({i}, {j}): {reason}")]
    Tableau { i: usize, j: usize, reason: String },

    #[error("malformed tableau shape: {0}")]
    Shape(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("rank mismatch: expected ell = {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("zero q-number denominator (a = {a}, i = {i}, j = {j}, k = {k})")]
    Singularity { a: usize, i: usize, j: usize, k: usize },

    #[error("negative radicand {value:e} in coefficient at row {a}")]
    Radicand { a: usize, value: f64 },

    #[error("ell = {0} is unsupported here: equivariant builders require ell >= 2")]
    UnsupportedRank(usize),

    #[error("enumeration too large: {0}")]
    Size(String),

    #[error("Re z = {re} is below the convergence abscissa {abscissa}")]
    Abscissa { re: f64, abscissa: f64 },

    #[error("symbol is not in degree-0 canonical form: {0}")]
    Form(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
