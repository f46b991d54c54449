use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate {index} = {value} lies outside the unit box")]
    OutOfBox { index: usize, value: f64 },

    #[error("dimension {n} exceeds the enumeration cap {cap}")]
    DimensionCap { n: usize, cap: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("witness point is infeasible: {0}")]
    InfeasibleWitness(String),

    #[error("certificate does not verify: {0}")]
    CertificateInvalid(String),

    #[error("inconsistent report: {0}")]
    InconsistentReport(String),

    #[error("malformed JSON: {0}")]
    MalformedJson(String),

    #[error("unsupported format version {found:?}")]
    VersionMismatch { found: String },

    #[error("matrix entry ({i},{j}) breaks symmetry by {delta:e}")]
    AsymmetricInput { i: usize, j: usize, delta: f64 },

    #[error("dimension inconsistency: {0}")]
    DimensionInconsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::MalformedJson(e.to_string())
    }
}
