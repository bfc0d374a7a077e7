use thiserror::Error;

use crate::modeltheory::LogicError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("seed is not strictly feasible: {0}")]
    InfeasibleSeed(String),

    #[error("unknown surface `{0}`")]
    UnknownSurfaceReference(String),

    #[error("unsupported relation `{0}`; only `<=` constraints are accepted")]
    UnsupportedRelation(String),

    #[error("box lies outside the ambient bounds on variable {variable}")]
    BoxOutsideAmbient { variable: usize },

    #[error("interval on variable {variable} does not contain the seed")]
    SeedNotContained { variable: usize },

    #[error("input box is not feasible")]
    InfeasibleInput,

    #[error("{what} of {requested} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, requested: u128, cap: u128 },

    #[error(transparent)]
    Logic(#[from] LogicError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found { Ok(()) } else { Err(Error::DimensionMismatch { expected, found }) }
}
