use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range user input.
    #[error("input error: {0}")]
    Input(String),
    /// The working precision could not certify a result.
    #[error("precision error: {0}")]
    Precision(String),
    /// Values from incompatible contexts were combined.
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Usage(_) => 2,
            Error::Precision(_) => 3,
        }
    }
}
