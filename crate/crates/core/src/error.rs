use thiserror::Error;

/// Errors produced anywhere in the verifier.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("interval overflow")]
    IntervalOverflow,

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("unsplittable: dimension {0} has zero width")]
    Unsplittable(usize),

    #[error("exhausted: no dimension wider than the precision")]
    Exhausted,

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported activation `{0}`")]
    UnsupportedActivation(String),

    #[error("output index {index} out of range for {outputs} outputs")]
    IndexOutOfRange { index: usize, outputs: usize },

    #[error("empty region")]
    EmptyRegion,

    #[error("radius must be non-negative, got {0}")]
    NegativeRadius(f64),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn dims(context: &'static str, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            context,
            expected,
            found,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
