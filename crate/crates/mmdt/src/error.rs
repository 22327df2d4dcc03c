//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MmdtError {
    /// Invalid input that violates a documented precondition or invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// A data file could not be parsed. Line numbers are 1-based and count
    /// physical lines of the file (the header line of a CSV is line 1).
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),

    /// The alternating driver measured an objective increase beyond the
    /// permitted slack. This indicates a solver defect, not bad input.
    #[error("objective increased during {step}: {previous} -> {current} (slack {slack})")]
    DescentViolation {
        step: String,
        previous: f64,
        current: f64,
        slack: f64,
    },
}

impl MmdtError {
    pub fn validation(msg: impl Into<String>) -> Self {
        MmdtError::Validation(msg.into())
    }

    pub fn parse(line: u64, msg: impl Into<String>) -> Self {
        MmdtError::Parse {
            line,
            message: msg.into(),
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        MmdtError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, MmdtError>;
