use alloc::string::String;
use core::fmt;

/// Errors surfaced by construction and numeric routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A size, index, or parameter failed validation.
    InvalidArgument(String),
    /// An iterative numeric routine stopped before reaching the requested
    /// accuracy; `achieved` is the error bound it could certify.
    NumericFailure { requested: f64, achieved: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::NumericFailure {
                requested,
                achieved,
            } => write!(
                f,
                "numeric failure: requested tolerance {requested:e}, achieved {achieved:e}"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
