use std::path::PathBuf;

use nashrand_core::{FamilyError, GameError, NeError, ParseError, SamplerError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Hypothesis(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Parse { .. } | CliError::Io { .. } => 2,
            CliError::Hypothesis(_) => 3,
            CliError::Resource(_) => 4,
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::UnsupportedDimension { .. } | FamilyError::Game(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Hypothesis(e.to_string()),
        }
    }
}

impl From<NeError> for CliError {
    fn from(e: NeError) -> Self {
        match e {
            NeError::SingularMatrix => CliError::Hypothesis(e.to_string()),
            NeError::DimensionTooLarge { .. } | NeError::NoEquilibriumFound { .. } => CliError::Resource(e.to_string()),
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<SamplerError> for CliError {
    fn from(e: SamplerError) -> Self {
        CliError::Resource(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Invalid(format!("csv output: {e}"))
    }
}
