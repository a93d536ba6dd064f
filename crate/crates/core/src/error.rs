use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("vector too short: need at least {required} entries, got {actual}")]
    TooShort { required: usize, actual: usize },

    #[error("undefined correlation: {0} input is constant")]
    ConstantInput(&'static str),

    #[error("zero variance: {0}")]
    ZeroVariance(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("label {label} out of range for {clusters} clusters")]
    LabelOutOfRange { label: usize, clusters: usize },

    #[error("distance between {left} and {right}: {source}")]
    Pair {
        left: String,
        right: String,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate range in column {0}: min equals max")]
    DegenerateRange(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}
