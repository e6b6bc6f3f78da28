use std::fmt;

use syft_bdd::DdError;
use thiserror::Error;

/// Syntax error in formula, partition, trace or input text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("atom `{0}` is not declared in the partition")]
    UnknownAtom(String),
    #[error("{count} atoms exceed the explicit alphabet limit of {limit}")]
    TooManyAtoms { count: usize, limit: usize },
    #[error("state limit of {0} exceeded")]
    StateLimit(usize),
    #[error("deadline exceeded")]
    Timeout,
    #[error("formula is not in negation normal form: {0}")]
    NotNnf(String),
    #[error("position {pos} out of range for a trace of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("malformed automaton: {0}")]
    MalformedDfa(String),
    #[error("decision diagram error: {0}")]
    Dd(#[from] DdError),
    #[error("fixpoint did not converge within {0} iterations")]
    IterationCap(usize),
    #[error("specification is unrealizable")]
    Unrealizable,
    #[error("atom `{0}` collides with the reserved end-of-trace marker")]
    TailCollision(String),
    #[error("lasso loop must be nonempty")]
    EmptyLoop,
    #[error("invalid transducer: {0}")]
    Transducer(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
