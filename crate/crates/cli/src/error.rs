use thiserror::Error;

/// CLI failure, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unusable configuration (exit 2).
    #[error("{path}: {message}")]
    Config { path: String, message: String },
    /// A numerical precondition failed (exit 3).
    #[error("{path}: {message}")]
    Numerical { path: String, message: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn core_at(path: impl Into<String>, e: olct_core::Error) -> Self {
        let (path, message) = (path.into(), e.to_string());
        if e.is_configuration() {
            CliError::Config { path, message }
        } else {
            CliError::Numerical { path, message }
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical { .. } | CliError::Io(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "configuration",
            CliError::Numerical { .. } => "numerical",
            CliError::Io(_) => "io",
        }
    }
}
