//! Error types shared across the instance parsers and generators.

use thiserror::Error;

/// Instance parsing or construction failure.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl ParseError {
    pub(crate) fn at(line: usize, msg: impl Into<String>) -> Self {
        ParseError::Line { line, msg: msg.into() }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        ParseError::Invalid(msg.into())
    }
}

/// Random instance generation gave up.
#[derive(Debug, Error)]
pub enum GenError {
    #[error("gave up after {proposals} rejected proposals ({placed} of {wanted} placed)")]
    BudgetExhausted { proposals: usize, placed: usize, wanted: usize },
    #[error("{0}")]
    BadParameters(String),
}
