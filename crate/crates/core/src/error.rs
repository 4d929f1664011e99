use thiserror::Error;

/// Errors produced by grid construction, operator assembly and solvers.
#[derive(Debug, Error)]
pub enum NcqmError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported boundary: expected {expected}, grid is {found}")]
    UnsupportedBoundary { expected: &'static str, found: &'static str },

    #[error("shape mismatch: {context} (left {left}, right {right})")]
    ShapeMismatch { context: &'static str, left: usize, right: usize },

    #[error("operator failed hermiticity check: deviation {deviation:.3e} exceeds {allowed:.3e}")]
    NotHermitian { deviation: f64, allowed: f64 },

    #[error("{what} did not converge after {iterations} iterations{}", step.map(|s| format!(" (step {s})")).unwrap_or_default())]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        step: Option<usize>,
    },

    #[error("LAPACK {routine} returned info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, NcqmError>;

impl NcqmError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        NcqmError::InvalidArgument(msg.into())
    }
}
