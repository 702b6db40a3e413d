use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("spectra have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: {0}")]
    InvalidDensity(String),

    #[error("matrix is singular or ill-conditioned (condition number {condition:.3e}, cap {cap:.1e})")]
    IllConditioned { condition: f64, cap: f64 },

    #[error("eigenvalue iteration failed to converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not eigenvalue-preserving on sampled density matrices (worst deviation {deviation:.3e})")]
    NotEigenvaluePreserving { deviation: f64 },

    #[error("malformed matrix file: {0}")]
    Format(String),
}
