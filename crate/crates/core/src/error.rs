use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("series did not converge after {terms} terms")]
    NonConvergence { terms: usize },

    #[error("matrix is not unimodular (|g|_F^2 = {frobenius_sq}, expected >= 2)")]
    NotUnimodular { frobenius_sq: f64 },

    #[error("operation requires the SL(2,R) realization")]
    RequiresSl2r,

    #[error("tail estimate {estimate:e} exceeds tolerance {tol:e}; enlarge the truncation")]
    TailTooLarge { estimate: f64, tol: f64 },

    #[error("quadrature refinement changed the value by {change:e} (tolerance {tol:e})")]
    QuadratureTolerance { change: f64, tol: f64 },

    #[error("spectral parameter {0} is resonant for the Harish-Chandra series")]
    Resonance(String),

    #[error("ill-conditioned c-function system (condition number {0:e})")]
    IllConditioned(f64),

    #[error("spectral data does not decay at the cutoff (relative tail {0:e})")]
    NoDecay(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
