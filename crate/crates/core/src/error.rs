//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by representation builders, flows, and report generators.
#[derive(Debug, Error)]
pub enum KnError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown representation label `{0}`")]
    UnknownLabel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain mismatch: evaluators expect `{expected}`, input declared `{got}`")]
    DomainMismatch { expected: String, got: String },

    #[error("numerical failure: {0}")]
    Numerics(String),

    #[error("r_x undefined on the null cone: every supplied invariant vanishes at this point")]
    RUndefined,

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, KnError>;
