//! Synthesis from LTL over finite traces.
//!
//! The pipeline compiles a formula into a minimal explicit DFA by formula
//! progression ([`automata`]), encodes it with binary state variables over a
//! decision-diagram manager ([`symbolic`]), solves the resulting reachability
//! game either explicitly or by a symbolic fixpoint ([`game`]), and extracts
//! an executable transducer ([`strategy`]). [`reduction`] maps the problem
//! to infinite-trace LTL synthesis and [`benchgen`] generates and times
//! random-conjunction benchmarks.

pub mod error;
pub mod ltlf;

pub use error::{Error, ParseError, Result};
pub use ltlf::{atoms_of, eval_trace, parse, to_nnf, Formula, Partition, Trace};
pub mod automata;
pub mod benchgen;
pub mod corpus;
pub mod game;
pub mod reduction;
pub mod strategy;
pub mod symbolic;
