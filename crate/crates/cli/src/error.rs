use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// A problem with a scenario document, located by line when possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub(crate) fn at(line: usize, key: &str, message: &str) -> Self {
        Self { line: Some(line), key: key.to_string(), message: message.to_string() }
    }

    pub(crate) fn key(key: &str, message: &str) -> Self {
        Self { line: None, key: key.to_string(), message: message.to_string() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Config { path: PathBuf, source: ConfigError },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("numerical integrity: {0}")]
    Numerical(String),

    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
}

impl CliError {
    /// Process exit code: 1 validation, 2 numerical integrity, 3 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }
}

impl From<slitwave::Error> for CliError {
    fn from(e: slitwave::Error) -> Self {
        use slitwave::Error as E;
        match e {
            E::Domain(_) | E::DegenerateGeometry(_) | E::GridMismatch(_) | E::SnapshotMismatch { .. } => {
                CliError::Validation(e.to_string())
            }
            E::Normalization | E::Sampling(_) | E::ImaginaryResidue { .. } => CliError::Numerical(e.to_string()),
        }
    }
}
