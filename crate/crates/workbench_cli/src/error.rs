use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: field `{field}`: {message}")]
    Schema {
        path: PathBuf,
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("{context}: {message}")]
    Computation {
        context: &'static str,
        message: String,
    },
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Schema { .. } | CliError::Validation(_) => 1,
            CliError::Computation { .. } | CliError::Output(_) => 2,
            CliError::OracleMismatch(_) => 3,
        }
    }

    pub fn computation(context: &'static str, err: impl std::fmt::Display) -> Self {
        CliError::Computation {
            context,
            message: err.to_string(),
        }
    }
}
