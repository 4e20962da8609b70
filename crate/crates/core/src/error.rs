use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input vector is empty")]
    EmptyInput,

    #[error("input vector has zero norm")]
    ZeroNorm,

    #[error("input vector is not normalized (norm = {norm}, tolerance = {tol})")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("amplitude index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("duplicate amplitude index {0}")]
    DuplicateIndex(usize),

    #[error("top-down synthesis requires a complete angle tree")]
    SparseTreeUnsupported,

    #[error("split {s} out of range [1, {n}]")]
    SplitOutOfRange { s: usize, n: usize },

    #[error("CSWAP chain registers differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid register for CSWAP chain: {0}")]
    InvalidRegister(String),

    #[error("gate {0} must be lowered before export")]
    UnloweredGate(String),

    #[error("circuit width {width} exceeds the simulation limit of {max} qubits")]
    TooWide { width: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("circuit not supported by the factored evaluator: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// I/O failures map to exit code 2, everything else to 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            _ => 1,
        }
    }
}
