use std::path::PathBuf;

use thiserror::Error;

/// Failures inside a single CMA-ES instance.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CmaError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("eigensystem is {age} generations old, lag allows {lag}")]
    StaleEigensystem { age: u64, lag: u64 },
    #[error("C^-1/2 requested on a covariance with non-positive eigenvalue {0:e}")]
    NotRepaired(f64),
    #[error("ranked candidates are not sorted: f[{index}] = {current} > f[{next_index}] = {next}")]
    Unsorted {
        index: usize,
        current: f64,
        next_index: usize,
        next: f64,
    },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObjectiveError {
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("failed to read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("failed to parse config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl ReportError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
