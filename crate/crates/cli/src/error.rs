use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] barypoly::error::Error),
    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),
    #[error("output failed: {0}")]
    Output(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io_error",
            CliError::Core(e) => e.code(),
            CliError::OracleDisagreement(_) => "oracle_disagreement",
            CliError::Output(_) => "output_error",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::OracleDisagreement(_) => 3,
            _ => 1,
        }
    }

    /// `{"error": code, "detail": message}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": self.code(), "detail": self.to_string() })
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
