//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by table construction, quadrature and expansion routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative refinement failed to stabilize. Carries the last two
    /// coefficient tables so the caller can inspect how far apart they are.
    #[error("convergence failure: {context} (last delta {delta:.3e})")]
    ConvergenceFailure {
        context: String,
        delta: f64,
        /// Coefficients from the finest refinement level reached.
        last: Vec<f64>,
        /// Coefficients from the level before it.
        previous: Vec<f64>,
    },

    /// The integrand returned NaN or an infinity.
    #[error("function returned a non-finite value at x = {x}")]
    InvalidFunction { x: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed table file or report input.
    #[error("parse error: {0}")]
    Parse(String),

    /// An internal iteration cap was exceeded; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Parse(_) => 2,
            Error::ConvergenceFailure { .. } => 3,
            Error::InvalidFunction { .. } => 4,
            Error::Io(_) => 5,
            Error::Internal(_) => 70,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
