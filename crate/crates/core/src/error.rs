use thiserror::Error;

use crate::graph::Vertex;

/// Errors raised by graph construction, the turn-rule constructions and the
/// percolation estimators.
///
/// The variants are grouped so a caller can map them onto process exit codes:
/// structural and precondition problems are usage errors, budget overruns are
/// resource errors, and [`Error::Invariant`] means a property that must hold
/// on every admissible input did not hold, which is always a bug.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed rotation system: {0}")]
    Structural(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degree condition violated at vertex {vertex}: {reason}")]
    DegreeCondition { vertex: Vertex, reason: String },

    #[error("curvature undefined at truncation boundary (vertex {0})")]
    BoundaryVertex(Vertex),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Coarse classification used by the command line front end.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Structural(_)
            | Error::Precondition(_)
            | Error::DegreeCondition { .. }
            | Error::BoundaryVertex(_)
            | Error::Io(_) => ErrorKind::Usage,
            Error::Resource(_) => ErrorKind::Resource,
            Error::Invariant(_) => ErrorKind::Invariant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Resource,
    Invariant,
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(format!("json: {e}"))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
