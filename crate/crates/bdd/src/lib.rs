//! Reduced ordered binary decision diagrams.
//!
//! A [`DdManager`] owns a variable order (extensible at the bottom), a
//! unique table and the operation caches. Diagrams are referred to through
//! [`Bdd`] handles; two handles from the same manager denote the same
//! boolean function iff they are equal.
//!
//! The manager supplies what a symbolic game solver needs: `ite` and the
//! derived connectives, existential and universal abstraction, simultaneous
//! substitution, evaluation and witness extraction for output variables.

mod dot;
mod manager;
mod synth;

pub use manager::{Bdd, DdManager, VarId, DEFAULT_NODE_CAP};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DdError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("no value for variable `{0}` in the assignment")]
    MissingValue(String),
    #[error("diagram handle belongs to a different manager")]
    ManagerMismatch,
    #[error("node cap of {0} nodes exceeded")]
    NodeCapExceeded(usize),
    #[error("bad table: {0}")]
    BadTable(String),
}

pub type Result<T> = std::result::Result<T, DdError>;
