use std::path::PathBuf;

use thiserror::Error;

/// Failure classes map one-to-one onto process exit codes.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("{0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Numeric(String),
}

impl SimError {
    pub fn config(msg: impl Into<String>) -> Self {
        SimError::Config(msg.into())
    }

    /// 0 is success; config and IO problems exit 2, numeric failures 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_) | SimError::Io { .. } => 2,
            SimError::Numeric(_) => 3,
        }
    }
}

impl From<sm_core::Error> for SimError {
    fn from(e: sm_core::Error) -> Self {
        match e {
            sm_core::Error::InvalidArgument(_) => SimError::Config(e.to_string()),
            sm_core::Error::NumericFailure { .. } => SimError::Numeric(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
