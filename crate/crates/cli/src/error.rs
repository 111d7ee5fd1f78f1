use dryout_core::Error as CoreError;
use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum RunError {
    /// The physics admits no solution for these inputs.
    #[error("{0}")]
    NoSolution(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::NoSolution(_) => 1,
            RunError::Invalid(_) => 2,
            RunError::Numerical(_) | RunError::Io(_) => 3,
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Invalid(e.to_string())
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::NoDryout { .. } => RunError::NoSolution(msg),
            CoreError::ContinuationFailed { .. } | CoreError::AllFailed(_) => RunError::NoSolution(format!(
                "no stationary phase transition found at this flux ({msg})"
            )),
            CoreError::InvalidInput(_)
            | CoreError::OutOfRange(_)
            | CoreError::AboveCritical { .. }
            | CoreError::NoPhaseTransition(_)
            | CoreError::NoCriticalPoint(_)
            | CoreError::Domain(_)
            | CoreError::UnknownModel(_)
            | CoreError::NegativePosition(_) => RunError::Invalid(msg),
            CoreError::NoBracket { .. }
            | CoreError::NoConvergence { .. }
            | CoreError::SingularJacobian { .. }
            | CoreError::DegenerateGap { .. }
            | CoreError::TooFewPoints(_) => RunError::Numerical(msg),
        }
    }
}
