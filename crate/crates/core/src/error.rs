use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("pole of {0}")]
    Pole(String),
    #[error("series cancellation beyond certified accuracy: {0}")]
    Cancellation(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("spectrum too short: {0}")]
    InsufficientSpectrum(String),
    #[error("representations disagree: {0}")]
    FormMismatch(String),
    #[error("table coverage: {0}")]
    Coverage(String),
    #[error("acceptance starvation: {0}")]
    Starvation(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by numerics.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidParameter(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
