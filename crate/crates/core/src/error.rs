//! Error type shared across the library.

use std::fmt;

/// Errors produced by the solver library.
#[derive(Debug)]
pub enum Error {
    /// A parameter is outside its mathematical domain (e.g. a weight
    /// exponent at or below -1, or alpha outside (0, 2)).
    Domain(String),
    /// The basis index (l = 0, mu = -1) is not part of the basis.
    ForbiddenIndex,
    /// Quadrature or truncation resolution is insufficient for the request.
    Resolution(String),
    /// The right-hand side touches a chain beyond the configured truncation.
    Truncation(String),
    /// A matrix expected to be symmetric positive definite was not.
    NotPositiveDefinite(String),
    /// File or stream I/O failed.
    Io(std::io::Error),
    /// A data file could not be parsed.
    Format(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::ForbiddenIndex => {
                write!(f, "index error: (l = 0, mu = -1) is not a basis index")
            }
            Error::Resolution(msg) => write!(f, "resolution error: {msg}"),
            Error::Truncation(msg) => write!(f, "truncation error: {msg}"),
            Error::NotPositiveDefinite(msg) => write!(f, "matrix not SPD: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
            Error::Format(msg) => write!(f, "format error: {msg}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
