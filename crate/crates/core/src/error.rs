use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    /// Inputs fall outside the hypotheses of the closed-form results.
    #[error("out of theory: {0}")]
    OutOfTheory(String),
    /// A proven structural statement failed to hold; always a bug.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
