use crate::simulate::MarginScale;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("{0}")]
    Domain(String),

    #[error("degenerate margin: column {0} is constant")]
    DegenerateMargin(usize),

    #[error("scale mismatch: expected {expected:?}, got {got:?}")]
    ScaleMismatch {
        expected: MarginScale,
        got: MarginScale,
    },

    #[error("subset index {index} out of range for {m} sites")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("admissible subset family is empty")]
    EmptyFamily,

    #[error("correlation not positive definite")]
    NotPositiveDefinite,

    #[error("insufficient tail sample: {0} points above the threshold")]
    InsufficientTail(usize),

    #[error("degenerate tail: zero log-spacings above the threshold")]
    DegenerateTail,

    #[error("empty exceedance at every grid point")]
    EmptySurvival,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
