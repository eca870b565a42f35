use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by parsing, splitting, spectral and evaluation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edge events")]
    EmptyInput,

    #[error("no edges remain after dropping self-loops")]
    EmptyGraph,

    #[error("degenerate train/probe split: {0}")]
    DegenerateSplit(String),

    #[error("perturbation fraction {p_h} removes no edges from a training set of {train_edges}")]
    DegeneratePerturbation { p_h: f64, train_edges: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range for {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("shape mismatch: expected {expected} nodes, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("Katz damping {damping} is not below 1/lambda_max = {limit}")]
    Divergence { damping: f64, limit: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("vector has zero variance")]
    ZeroVariance,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used to choose process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter(_) | Error::IndexOutOfRange { .. } => ErrorKind::Usage,
            Error::Parse { .. }
            | Error::EmptyInput
            | Error::EmptyGraph
            | Error::DegenerateSplit(_)
            | Error::DegeneratePerturbation { .. }
            | Error::ShapeMismatch { .. }
            | Error::UndefinedMetric(_)
            | Error::Io(_) => ErrorKind::Data,
            Error::Divergence { .. } | Error::Numerical(_) | Error::ZeroVariance => ErrorKind::Numerical,
        }
    }
}
