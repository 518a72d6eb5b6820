use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{0}")]
    Validation(String),

    #[error("{0}")]
    Infeasible(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("solvers disagree: {0}")]
    Disagreement(String),

    #[error(transparent)]
    Solver(boxproj_core::Error),
}

impl CliError {
    /// Process exit code; 2 is left to the argument parser.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 3,
            CliError::Validation(_) => 4,
            CliError::Infeasible(_) => 5,
            CliError::Io { .. } => 6,
            CliError::Disagreement(_) => 7,
            CliError::Solver(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<boxproj_core::Error> for CliError {
    fn from(e: boxproj_core::Error) -> Self {
        use boxproj_core::Error as E;
        match e {
            E::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            E::ShapeMismatch { .. } | E::Empty | E::InvalidInput(_) | E::InvalidBudget(_) => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Solver(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
