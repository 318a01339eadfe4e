use std::path::Path;

use coop_emission::oracle::OracleError;
use coop_emission::{ConfigError, DecayError, SpectrumError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    NotConverged(String),
    #[error("closed form and oracle disagree: worst relative error {worst:e} exceeds tolerance {tolerance:e}")]
    Disagreement { worst: f64, tolerance: f64 },
    #[error("{0}")]
    Numerics(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// 0 success, 1 I/O or numerical failure, 2 invalid input, 3 oracle
    /// non-convergence, 4 validation tolerance exceeded.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Numerics(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::NotConverged(_) => 3,
            CliError::Disagreement { .. } => 4,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Invalid(format!("system.{e}"))
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::Tensor(t) => CliError::Numerics(t.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<DecayError> for CliError {
    fn from(e: DecayError) -> Self {
        match e {
            DecayError::Config(c) => c.into(),
            other => CliError::Numerics(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Config(c) => c.into(),
            e @ OracleError::NotConverged { .. } => CliError::NotConverged(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}
