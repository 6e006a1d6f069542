use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("matrix data has {found} entries, expected {expected} for a square matrix")]
    NotSquare { expected: usize, found: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error(
        "matrix is not Hermitian: entry ({row}, {col}) differs from the conjugate of ({col}, {row}) by {deviation:e}"
    )]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("vector norm {norm:e} is too small to define a direction")]
    DegenerateDirection { norm: f64 },

    #[error("state vector is not unit norm (norm = {norm})")]
    NotUnitNorm { norm: f64 },

    #[error("perpendicular state is not orthogonal to the reference state (|overlap| = {overlap:e})")]
    NotOrthogonal { overlap: f64 },

    #[error("observables commute; the analysis requires [A, B] != 0")]
    CommutingPair,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}
