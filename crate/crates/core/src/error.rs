use std::fmt;

use thiserror::Error;

/// A syntax error in user-supplied text, with the byte offset where it was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.message, self.pos)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("invalid continued fraction: {0}")]
    InvalidCf(String),

    #[error("z-rule evaluated to 0 at step n = {step}")]
    NonPositiveZ { step: usize },

    #[error(
        "digit budget exceeded at x_{step}: projected {projected_digits} digits, budget {budget}"
    )]
    DigitBudgetExceeded {
        step: usize,
        projected_digits: u64,
        budget: u64,
    },

    #[error("index {index} out of range: only {available} terms stored")]
    IndexOutOfRange { index: usize, available: usize },

    #[error("insufficient terms: need at least {required}, have {available}")]
    InsufficientTerms { required: usize, available: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
