use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input (dimension mismatch, invalid path, bad parameter).
    #[error("invalid input: {0}")]
    Input(String),
    /// An exhaustive enumeration was requested beyond its size guard.
    #[error("enumeration too large: {0}")]
    Size(String),
    /// A CSV corpus could not be parsed.
    #[error("format error at row {row}: {message}")]
    Format { row: usize, message: String },
    /// A quantity is not defined for the given data (e.g. separation of a one-mean run).
    #[error("undefined value: {0}")]
    Undefined(String),
    /// Experiment configuration cannot be satisfied by the corpus.
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
