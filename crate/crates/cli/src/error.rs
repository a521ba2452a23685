use std::path::PathBuf;

use thiserror::Error;
use toprec_core::analysis::AnalysisError;
use toprec_core::bounds::BoundsError;
use toprec_core::engine::EngineError;
use toprec_core::{CurveError, ParseScalarError, SeriesError};

use crate::spec::SpecError;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    BoundViolated = 1,
    InvalidInput = 2,
    Truncation = 3,
    Degenerate = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Spec { path: PathBuf, source: SpecError },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("{0}")]
    Analysis(#[from] AnalysisError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("bound violated: {0}")]
    Violated(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("truncation recheck failed: {0}")]
    Recheck(String),
}

fn engine_code(e: &EngineError) -> ExitCode {
    match e {
        EngineError::Truncation { .. } | EngineError::KernelData { .. } => ExitCode::Truncation,
        EngineError::Curve(CurveError::Truncation(_)) => ExitCode::Truncation,
        EngineError::Series(SeriesError::BeyondTruncation { .. } | SeriesError::OrderBeyondTruncation { .. }) => ExitCode::Truncation,
        _ => ExitCode::InvalidInput,
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Engine(e) => engine_code(e),
            CliError::Bounds(BoundsError::Engine(e)) => engine_code(e),
            CliError::Curve(CurveError::Truncation(_)) => ExitCode::Truncation,
            CliError::Analysis(AnalysisError::Degenerate { .. }) => ExitCode::Degenerate,
            CliError::Violated(_) => ExitCode::BoundViolated,
            CliError::Degenerate(_) => ExitCode::Degenerate,
            CliError::Recheck(_) => ExitCode::Truncation,
            _ => ExitCode::InvalidInput,
        }
    }
}
