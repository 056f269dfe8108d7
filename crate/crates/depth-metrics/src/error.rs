use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("index {index} out of range for sample size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("empty region: support values need at least one sample index")]
    EmptyRegion,

    #[error("empty sample")]
    EmptySample,

    /// Requested trimming level cannot be satisfied by the samples.
    #[error(
        "level range: epsilon {epsilon} is not below the attainable depth level {alpha_star}; \
         lower epsilon or use deeper samples"
    )]
    LevelRange { epsilon: f64, alpha_star: f64 },

    #[error("depth notion `{notion}` is not supported here: {reason}")]
    UnsupportedDepthNotion {
        notion: &'static str,
        reason: &'static str,
    },

    #[error("degenerate integration box: {0}")]
    DegenerateBox(String),

    #[error("degenerate baseline: clean distance must be positive, got {0}")]
    DegenerateBaseline(f64),

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}:{line}:{column}: non-finite value")]
    NonFiniteValue {
        path: String,
        line: usize,
        column: usize,
    },

    #[error("experiment config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
