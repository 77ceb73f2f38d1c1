use std::path::PathBuf;

use rangesketch::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("output: {0}")]
    Output(String),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad parameters or input, 3 for construction failures, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) => match e {
                Error::NetConstruction { .. }
                | Error::NetViolation { .. }
                | Error::Search(_)
                | Error::CodeBudget { .. } => 3,
                _ => 2,
            },
            CliError::Io { .. } | CliError::Output(_) => 4,
            CliError::Usage(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
