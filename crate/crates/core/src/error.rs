use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("result dimension {dim} exceeds the configured maximum {max}")]
    DimOverflow { dim: usize, max: usize },

    #[error("matrix is not Hermitian: max |A - A\u{2020}| entry = {deviation:.3e} (tolerance {tolerance:.1e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("eigensolver failed to converge within {0} sweeps")]
    EigNoConvergence(usize),

    #[error("eigenvalue {0:.3e} is below the negativity tolerance {1:.1e}")]
    NegativeEigenvalue(f64, f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("trace drift |Tr rho - 1| = {err:.3e} at t = {t} ns exceeds the abort threshold {threshold:.1e}")]
    TraceDrift { t: f64, err: f64, threshold: f64 },

    #[error("non-finite matrix entry at t = {0} ns (integration step too large?)")]
    NonFinite(f64),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 1 for config/validation problems,
    /// 2 for numerical aborts.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TraceDrift { .. }
            | Error::NonFinite(_)
            | Error::EigNoConvergence(_)
            | Error::NegativeEigenvalue(..)
            | Error::NotHermitian { .. } => 2,
            _ => 1,
        }
    }
}
