use alloc::string::String;
use core::fmt;

/// Errors produced by the analytics routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input fell outside the mathematical domain of the operation.
    Domain(String),
    /// An iterative routine stopped before reaching the requested
    /// tolerance; `achieved` is the error bound it could certify.
    Numeric { message: String, achieved: f64 },
    /// A calendar month required by the computation is missing from the
    /// input series.
    MonthGap { year: i32, month: u32 },
    /// Too few observations for the requested statistic.
    InsufficientData { needed: usize, got: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Numeric { message, achieved } => {
                write!(f, "numeric error: {message} (achieved tolerance {achieved:e})")
            }
            Error::MonthGap { year, month } => {
                write!(f, "month gap: series is missing {year}-{month:02}")
            }
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need at least {needed} observations, got {got}")
            }
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
