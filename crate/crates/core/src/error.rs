use thiserror::Error;

/// Errors raised by the geometry, decomposition, perimeter, extension and
/// curve routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("resolution too coarse: {0}")]
    ResolutionTooCoarse(String),
    #[error("memory budget exceeded: {cells} cells requested, budget {budget}")]
    MemoryBudget { cells: u64, budget: u64 },
    #[error("construction failed at level {level}, cube {cube}: {reason}")]
    Construction {
        level: usize,
        cube: usize,
        reason: String,
    },
    #[error("point lies in the truncated collar")]
    CollarPoint,
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("unsupported exponent p = {0}")]
    UnsupportedExponent(f64),
    #[error("endpoints are not connected in the admissible region")]
    Unreachable,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
