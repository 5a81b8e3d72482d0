use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the algebraic engine and its front ends.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("bracket of degree {degree} exceeds nilpotency class {class}")]
    DegreeOverflow { degree: usize, class: usize },

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("automorphism mode requires |det| = 1, found det = {0}")]
    NotAutomorphism(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("exact methods disagree on layer {layer}: structural {structural}, trace {trace}")]
    MethodDisagreement {
        layer: usize,
        structural: String,
        trace: String,
    },

    #[error("no checkpoint at {0}")]
    NoCheckpoint(PathBuf),

    #[error("corrupt checkpoint {path}: {reason}")]
    CorruptCheckpoint { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
