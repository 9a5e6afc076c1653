use thiserror::Error;

/// Errors raised by the lab.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("grid mismatch: {left} vs {right} interior nodes")]
    SpecMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("coefficient validation failed: {0}")]
    Validation(String),

    #[error("outside the domain of definition: {0}")]
    Domain(String),

    #[error("no convergence after depth {depth}: last gap {gap:.3e} (tolerance {tol:.3e})")]
    Convergence {
        depth: f64,
        gap: f64,
        tol: f64,
        /// (depth, gap) for every refinement attempted.
        gaps: Vec<(f64, f64)>,
    },
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn usage(msg: impl Into<String>) -> LabError {
    LabError::Usage(msg.into())
}
