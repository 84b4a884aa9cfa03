use std::path::Path;

/// Errors surfaced by the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] translit_core::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },

    #[error("{path}:{line}: {message}")]
    Data { path: String, line: usize, message: String },
}

impl CliError {
    /// 1 for usage errors, 2 for everything caused by the data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn data(path: &Path, line: usize, message: impl Into<String>) -> Self {
        CliError::Data {
            path: path.display().to_string(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
