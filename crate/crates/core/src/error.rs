use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An explicit enumeration refused to run past its configured limit.
    #[error("{what} budget exceeded: need {needed}, limit {limit}; {hint}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
        hint: &'static str,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
