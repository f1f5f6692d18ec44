use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular matrix: rank deficiency detected at pivot column {column}")]
    Singular { column: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("row {row} is not stochastic: {reason}")]
    NotStochastic { row: usize, reason: String },

    #[error("invalid state partition: {0}")]
    Partition(String),

    #[error("chain is not {side}-commutable")]
    NotCommutable { side: &'static str },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("simulation truncated: {truncated} of {replications} runs hit the step limit")]
    Truncated {
        truncated: usize,
        replications: usize,
    },
}

impl Error {
    /// Errors that come from invalid input data rather than bad usage or bugs.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
