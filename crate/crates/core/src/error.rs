//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid channel pair ({i}, {j}) for {n} channels")]
    InvalidChannel { i: usize, j: usize, n: usize },

    #[error("matrix is not unitary: max |U^dagger U - I| = {defect:e}")]
    NotUnitary { defect: f64 },

    #[error("matrix is not special: |det U - 1| = {defect:e}")]
    NotSpecial { defect: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state vector is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("geodesic precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate geodesic leg: endpoints represent the same ray")]
    DegenerateLeg,

    #[error("rephasing undefined: states are orthogonal")]
    UndefinedRephase,

    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),

    #[error("geometric phase undefined: {0}")]
    UndefinedPhase(String),

    #[error("cyclic evolution does not close: residual {residual:e}")]
    InconsistentCycle { residual: f64 },

    #[error("invalid factor chain: {0}")]
    InvalidChain(String),

    #[error("decomposition failed: residual {residual:e}")]
    DecompositionFailure { residual: f64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
