use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] betaskel::Error),
    /// A checked precondition or invariant did not hold.
    #[error("check failed: {0}")]
    Check(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

impl CliError {
    /// 1 for bad parameters, 2 for failed checks, 3 for I/O and file format problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Core(_) => 1,
            CliError::Check(_) => 2,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Json { .. } => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
