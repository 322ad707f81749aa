use thiserror::Error;

/// Unified error type for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the admissible domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value left the representable double-precision range.
    #[error("overflow computing {what}")]
    Overflow { what: String },

    /// An adaptive routine hit its work cap before certifying its target.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    /// An iterative routine failed to converge within its iteration cap.
    #[error("no convergence after {iterations} iterations (last estimate {last})")]
    NonConvergence { iterations: u64, last: f64 },

    /// Adaptive quadrature could not certify the requested accuracy.
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    /// Malformed textual input (JSON, CSV, CLI values).
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally valid input violating a semantic invariant.
    #[error("invalid input at {path}: {message}")]
    Validation { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
