use thiserror::Error;

/// Errors raised by the factorization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("matrix is not positive semidefinite: {0}")]
    PsdViolation(String),

    #[error("triangular factor is singular at diagonal entry {index}")]
    Singular { index: usize },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix stream was already consumed; single-pass access violated")]
    SinglePassViolation,

    #[error("loss of orthogonality: |B|_F = {b_norm:e} exceeds |A|_F = {a_norm:e}")]
    OrthogonalityLoss { a_norm: f64, b_norm: f64 },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    /// True for failures caused by the numbers rather than by the caller's arguments.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::Singular { .. }
                | Error::PsdViolation(_)
                | Error::NoConvergence { .. }
                | Error::OrthogonalityLoss { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Non-fatal diagnostics attached to a factorization result.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// A matrix that had to be inverted or solved against is badly conditioned.
    IllConditioned { what: &'static str, condition: f64 },
    /// The requested rank exceeded the numerical rank detected by pivoted QR.
    RankTruncated { requested: usize, detected: usize },
    /// A diagonal shift was added to rescue a Cholesky factorization.
    ShiftApplied { shift: f64 },
}
