use cawf_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{key}: {msg}")]
    Config { key: String, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("numeric degeneracy: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(CoreError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DegenerateDiffusion(_)
            | CoreError::SingularSystem { .. }
            | CoreError::SurvivalUnderflow { .. }
            | CoreError::NotNormalized { .. }
            | CoreError::InvalidEquilibrium(_) => CliError::Degenerate(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        CliError::Config { key: key.into(), msg: msg.into() }
    }

    /// 0 success, 1 usage or configuration, 2 validation failure, 3 numeric degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Degenerate(_) => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
