//! Error taxonomy shared by every module; the CLI maps variants onto exit codes.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A caller violated an operation precondition (bad index, non-geodesic
    /// input where a geodesic is required, empty set where nonempty is needed).
    #[error("input error: {0}")]
    Input(String),

    /// A graph file (or word) failed to parse; positions are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A lookup fell outside an enumerated ball.
    #[error("range error: {0}")]
    Range(String),

    /// A configurable guard (oracle element cap, extension search cap) tripped.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A structural promise of this library failed to hold; always a bug or a
    /// hypothesis violation worth surfacing loudly.
    #[error("internal invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Process exit code used by the CLI: 0 success, 1 usage/input, 2 parse,
    /// 3 internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Range(_) | Error::Resource(_) => 1,
            Error::Parse { .. } => 2,
            Error::Invariant(_) => 3,
        }
    }
}
