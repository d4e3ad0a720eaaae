use std::path::{Path, PathBuf};

use thiserror::Error;

/// Failures surfaced by the runner, each mapped to a process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {field}: {message}")]
    Config { field: String, message: String },

    #[error("numerical failure at s = {s}, tau = {tau}: {message}")]
    Convergence { s: f64, tau: f64, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 1 for configuration, domain and I/O problems; 2 for convergence failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Convergence { .. } => 2,
            CliError::Config { .. } | CliError::Io { .. } => 1,
        }
    }
}

impl From<dd_discord::Error> for CliError {
    fn from(err: dd_discord::Error) -> Self {
        match err {
            dd_discord::Error::Domain { what, value, reason } => {
                CliError::config(what, format!("{reason} (got {value})"))
            }
            dd_discord::Error::Convergence {
                s,
                tau,
                subdivisions,
                abs_error,
            } => CliError::Convergence {
                s,
                tau,
                message: format!("quadrature stopped after {subdivisions} subdivisions, error estimate {abs_error:e}"),
            },
        }
    }
}
