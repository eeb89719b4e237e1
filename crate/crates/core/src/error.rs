use thiserror::Error;

/// Errors produced by the solvers, the oracle and the file formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty instance")]
    EmptyInstance,

    #[error("invalid job data at index {index}: {reason}")]
    InvalidJob { index: usize, reason: String },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("state budget exceeded: {live} live states (budget {budget})")]
    StateBudgetExceeded { live: usize, budget: usize },

    #[error("instance too large for oracle: n = {n} exceeds cap {cap}")]
    OracleTooLarge { n: usize, cap: usize },

    #[error("invalid epsilon {0:?}: expected a positive decimal or rational")]
    InvalidEpsilon(String),

    #[error("empty front")]
    EmptyFront,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
