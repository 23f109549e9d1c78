use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An operation was called outside the set where it is defined.
    #[error("{op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A weight prefix (or a window built on it) would have to extend past what
    /// can be evaluated.
    #[error("{weight}: index {needed} is beyond the evaluable horizon (available up to {available})")]
    Horizon {
        weight: String,
        needed: usize,
        available: usize,
    },

    #[error("{family} weights overflow double range at index {index}")]
    Overflow { family: String, index: usize },

    #[error("non-finite value at (m={m}, n={n})")]
    NonFinite { m: usize, n: usize },

    #[error("{name}: weight p_{index} = {value} is not positive")]
    NonPositiveWeight {
        name: String,
        index: usize,
        value: f64,
    },

    #[error("{name}: prefix sum not strictly increasing at index {index}")]
    NotIncreasing { name: String, index: usize },

    #[error("{op} requires a real-valued sequence")]
    ComplexInput { op: &'static str },

    #[error("grid of {rows}x{cols} cells cannot be allocated")]
    Resource { rows: usize, cols: usize },

    #[error("expression: {0}")]
    Parse(String),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}
