//! CLI error type with the exit-code mapping: configuration problems exit
//! with 1, runtime failures with 2.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The scenario file (or another input document) failed to parse.
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    /// A parsed value violates its constraint; the message names the field.
    #[error("invalid configuration: {0}")]
    Validation(String),

    /// An input file could not be read.
    #[error("{0}")]
    Io(String),

    /// A failure after configuration was accepted (optimizer errors, output
    /// writing).
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl From<stackopt_core::Error> for CliError {
    fn from(err: stackopt_core::Error) -> Self {
        match err {
            stackopt_core::Error::InvalidParam { .. } | stackopt_core::Error::ConfigInvalid(_) => {
                CliError::Validation(err.to_string())
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}
