use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{engine} engine supports n <= {max}, got n = {n}")]
    DimensionTooLarge {
        engine: &'static str,
        n: usize,
        max: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected a {expected}x{expected} matrix, got {got}x{got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("entry count {len} does not match n = {n} (need n*n)")]
    BadEntryCount { n: usize, len: usize },

    #[error("matrix is not Hermitian: |A[{i}][{j}] - conj(A[{j}][{i}])| = {residual:e}")]
    NotHermitian { i: usize, j: usize, residual: f64 },

    #[error("matrix is not positive semidefinite: {0}")]
    NotPsd(String),

    #[error("not a correlation matrix: {0}")]
    NotCorrelation(String),

    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("permanent of a Hermitian matrix has imaginary residue {residue:e} (value {value:e})")]
    ImaginaryResidue { residue: f64, value: f64 },

    #[error("diagonal entry {0} has no exact square root")]
    NonSquareDiagonal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
