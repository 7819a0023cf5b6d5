//! File formats, configuration files and the command-line front end for
//! `sfc-core`.

pub mod cli;
pub mod config;
pub mod formats;

use thiserror::Error;

/// Errors surfaced by the front end, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    ResourceCap(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::ResourceCap(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::ResourceCap(_) => "resource-cap",
        }
    }
}

impl From<sfc_core::Error> for CliError {
    fn from(e: sfc_core::Error) -> Self {
        if e.is_resource_cap() {
            CliError::ResourceCap(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("malformed JSON: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
