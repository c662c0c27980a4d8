use onebit_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("physics contract violated: {0}")]
    Physics(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Schema(_) | Self::Io(_) => 2,
            Self::Physics(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Inconsistent(_)
            | CoreError::RankError(_)
            | CoreError::NonNormalizing(_)
            | CoreError::InvalidDensityMatrix(_) => Self::Physics(e.to_string()),
            _ => Self::Config(e.to_string()),
        }
    }
}
