use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

/// Failures surfaced by the command-line front end. Each variant maps to a
/// stable process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Parse(String),

    #[error("{0}")]
    Parameter(String),

    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse(_) => 2,
            CliError::Parameter(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse(_) => "parse",
            CliError::Parameter(_) => "parameter",
            CliError::Numerical(_) => "numerical",
        }
    }

    /// Machine-readable form written to stderr on failure.
    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "code": self.exit_code(), "message": self.to_string() } })
    }
}

impl From<randfact_core::Error> for CliError {
    fn from(e: randfact_core::Error) -> Self {
        match e {
            e if e.is_numerical() => CliError::Numerical(e.to_string()),
            e @ randfact_core::Error::SinglePassViolation => CliError::Numerical(e.to_string()),
            e @ randfact_core::Error::NonFinite { .. } => CliError::Parse(e.to_string()),
            e => CliError::Parameter(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
