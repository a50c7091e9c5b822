use thiserror::Error;

use crate::ElementId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller broke an operation's precondition (out-of-range element, wrong side, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// A solver invariant failed. This is a bug in the solver, not bad input.
    #[error("invariant violation [{stage}]: {detail}")]
    InvariantViolation { stage: &'static str, detail: String },

    #[error("element {element} out of range for ground set of size {n}")]
    ElementOutOfRange { element: ElementId, n: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("exhaustive brute force is limited to n <= {limit} (got n = {n}); use classic::naive_exact instead")]
    BruteForceTooLarge { n: usize, limit: usize },

    #[error("unknown instance family `{0}`")]
    UnknownFamily(String),

    #[error("bootstrap set is not common independent")]
    BootstrapRejected,

    #[error("malformed hidden graph dump at line {line}: {detail}")]
    GraphFormat { line: usize, detail: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn contract(detail: impl Into<String>) -> Self {
        Error::ContractViolation(detail.into())
    }

    pub(crate) fn invariant(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::InvariantViolation {
            stage,
            detail: detail.into(),
        }
    }

    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation { .. })
    }
}
