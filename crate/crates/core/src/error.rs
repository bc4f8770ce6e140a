use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the set where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result does not fit in an `f64`.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A parameter is out of its allowed range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A hypothesis of the certified statement fails (evenness, normalization, positive curvature).
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no convergence after {iterations} iterations (last step {last_step:e})")]
    NonConvergence { iterations: usize, last_step: f64 },

    /// The function is not within the acceptance threshold of any solution branch.
    #[error("not near any branch: best fit {branch} has residual {residual:e} > threshold {threshold:e}")]
    NotNearBranch {
        branch: &'static str,
        residual: f64,
        threshold: f64,
    },

    #[error("classification error: {0}")]
    Classification(String),

    #[error("tolerance {tol:e} not achieved within {evaluations} evaluations (estimate {estimate:e})")]
    ToleranceNotAchieved {
        tol: f64,
        estimate: f64,
        evaluations: usize,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn overflow(msg: impl Into<String>) -> Self {
        Error::Overflow(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
