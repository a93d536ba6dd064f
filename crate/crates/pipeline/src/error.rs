use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = PipelineError> = std::result::Result<T, E>;

/// Problems with the input file or the requested configuration.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("missing column: {0}")]
    MissingColumn(String),

    #[error("row {row}, column {column}: not a number: {value:?}")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("duplicate municipality name: {0}")]
    DuplicateName(String),

    #[error("row {row}, column {column}: value {value} violates {constraint}")]
    OutOfRange {
        row: usize,
        column: String,
        value: f64,
        constraint: &'static str,
    },

    #[error("empty municipality name at row {0}")]
    EmptyName(usize),

    #[error("need at least 2 data rows, found {0}")]
    TooFewRows(usize),

    #[error("unknown column: {0}")]
    UnknownColumn(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed run report: {0}")]
    Report(#[from] serde_json::Error),
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Input(#[from] InputError),

    #[error("{context}: {source}")]
    Numeric {
        context: String,
        #[source]
        source: clustat_core::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl PipelineError {
    pub fn numeric(context: impl Into<String>) -> impl FnOnce(clustat_core::Error) -> Self {
        let context = context.into();
        move |source| PipelineError::Numeric { context, source }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        InputError::Config(msg.into()).into()
    }

    /// Process exit code: 2 for input validation, 3 for numeric or
    /// algorithm failures, 1 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::Input(_) => 2,
            PipelineError::Numeric { .. } => 3,
            PipelineError::Io { .. } => 1,
        }
    }
}

pub(crate) fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> PipelineError {
    let path = path.into();
    move |source| PipelineError::Io { path, source }
}
