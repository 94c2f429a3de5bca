use std::path::PathBuf;

/// Failure of a command, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Usage or configuration problem (exit code 2).
    #[error("configuration error: {0}")]
    Config(String),
    /// Malformed or inconsistent input data (exit code 1).
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Model(#[from] compind_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
