use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A text input (automaton, grammar, domains, instance file) failed to parse.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An argument violates a precondition (alphabet mismatch, bad index, ...).
    #[error("{0}")]
    Input(String),

    /// The instance has no solution and the operation cannot produce a result.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// An internal invariant was violated; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
