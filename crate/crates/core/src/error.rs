use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Variants are grouped by [`ErrorKind`] so callers (the CLI in particular)
/// can map them onto distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid step set: {0}")]
    StepSet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("jump {jump} at position {position} is not in the step set")]
    JumpNotInSupport { jump: i64, position: usize },
    #[error("enumeration too large: {paths} paths exceed the guard of {limit}")]
    TooLarge { paths: f64, limit: f64 },
    #[error("kernel roots cannot be classified at z = {z}: {reason}")]
    Unclassifiable { z: String, reason: String },
    #[error("ill-conditioned boundary system (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("window too small: neglected mass {mass:.3e} exceeds {bound:.1e}; enlarge the window")]
    WindowOverflow { mass: f64, bound: f64 },
    #[error("computation failed: {0}")]
    Computation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serialization(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Computation,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::StepSet(_)
            | Error::InvalidArgument(_)
            | Error::JumpNotInSupport { .. }
            | Error::TooLarge { .. } => ErrorKind::Validation,
            Error::Io(_) => ErrorKind::Io,
            _ => ErrorKind::Computation,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
