use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("row `{theta}` sums to {sum}, not 1")]
    RowSum { theta: String, sum: String },

    #[error("negative probability {value} at ({theta}, {sample})")]
    NegativeProbability {
        theta: String,
        sample: String,
        value: String,
    },

    #[error("sample point `{0}` has probability zero under every parameter value")]
    DeadSamplePoint(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("epsilon {0} is outside (0, 1/64)")]
    EpsilonOutOfRange(String),

    #[error("event has probability zero under `{0}`")]
    ZeroProbabilityEvent(String),

    #[error("statistic is not ancillary: {0}")]
    NotAncillary(String),

    #[error("expected {expected} weights, got {actual}")]
    WeightArityMismatch { expected: usize, actual: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("ground set mismatch: {left} vs {right}")]
    GroundSetMismatch { left: usize, right: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("{what} of size {size} exceeds the cap of {cap}")]
    SizeCapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parameter spaces differ: {left:?} vs {right:?}")]
    ThetaSpaceMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },

    #[error("unknown sample label `{0}`")]
    UnknownSampleLabel(String),

    #[error("sample index {index} out of range for {size} points")]
    SampleOutOfRange { index: usize, size: usize },

    #[error("inference bases are not SC-equivalent")]
    NotScEquivalent,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// True for errors caused by malformed or inconsistent user input.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::SizeCapExceeded { .. })
    }
}
