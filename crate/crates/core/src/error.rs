use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// Squeeze parameter outside the supported range.
    #[error("squeeze parameter r = {0} outside supported range [0, {max}]", max = crate::gaussian::MAX_SQUEEZE)]
    SqueezeRange(f64),

    /// The bound degenerates because the tail probability underflowed.
    #[error("unbounded result in {op}: tail probability {tail:e} too small for x1 = {x1}")]
    Unbounded { op: &'static str, x1: f64, tail: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("integration step too large: rate*dt = {0} exceeds 0.1")]
    Stability(f64),

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    /// True for errors caused by numeric domain violations rather than bad configuration.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::SqueezeRange(_) | Error::Unbounded { .. } | Error::Stability(_) | Error::Estimation(_))
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

pub type Result<T> = std::result::Result<T, Error>;
