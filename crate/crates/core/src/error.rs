use thiserror::Error;

pub type Result<T> = std::result::Result<T, HjError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HjError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("t must be nonnegative (got {0})")]
    NegativeTime(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("no gradient of H supplied for neuron {0}")]
    MissingGradient(usize),

    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no grid point with finite value")]
    EmptyEffectiveGrid,

    #[error("training diverged at step {0}")]
    Diverged(usize),
}

impl HjError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        HjError::InvalidArgument(msg.into())
    }
}
