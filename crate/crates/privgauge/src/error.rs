//! Crate-wide error type and result alias.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data: wrong column count, non-numeric feature cell, ...
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    /// The input contained no records at all.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// A parameter or config value is out of its allowed range.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called with incompatible arguments.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map_or(0, |p| p.line());
        if e.is_io_error() {
            match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::Io(io),
                _ => unreachable!("is_io_error guarantees an io kind"),
            }
        } else {
            Error::parse(line, e.to_string())
        }
    }
}

impl Error {
    pub(crate) fn parse(line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Process exit code used by the CLI: 1 for usage/config problems,
    /// 2 for i/o failures and unreadable input data.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Usage(_) => 1,
            Error::Parse { .. } | Error::EmptyInput(_) | Error::Io(_) => 2,
        }
    }
}
