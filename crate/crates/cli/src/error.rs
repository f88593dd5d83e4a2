use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] sdp_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("claim {0} failed")]
    ClaimFailed(String),
}

impl CliError {
    /// 1 for failed claims, 2 for usage, parse and I/O problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ClaimFailed(_) => 1,
            CliError::Core(sdp_core::Error::Verification(_)) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
