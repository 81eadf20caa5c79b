use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("{requested} qubits exceeds the cap of {cap}")]
    TooManyQubits { requested: usize, cap: usize },

    #[error("sampled a measurement branch with zero probability")]
    ImpossibleBranch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input has length {found}, expected {expected}")]
    WrongInputLength { expected: usize, found: usize },

    #[error("malformed adversary output: {0}")]
    MalformedOutput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
