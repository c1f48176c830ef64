use thiserror::Error;

/// Failures, each tied to one process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config files, catalog names or parameter domains.
    #[error("configuration error: {0}")]
    Config(String),
    /// The fitter could not produce a candidate.
    #[error("fitter error: {0}")]
    Fit(String),
    /// A run completed but its check failed.
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Fit(_) => 3,
            CliError::Validation(_) => 4,
        }
    }

    pub fn config(e: impl std::fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn fit(e: impl std::fmt::Display) -> Self {
        CliError::Fit(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("json: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(format!("csv: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
