use thiserror::Error;

/// Errors raised by the lattice-cohomology computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("edge refers to unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop at vertex `{0}` is not allowed")]
    SelfLoop(String),
    #[error("the intersection form is degenerate (det = 0)")]
    DegenerateForm,
    #[error("the intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("the graph is not connected")]
    Disconnected,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element is not characteristic")]
    NotCharacteristic,
    #[error("class mismatch: {0}")]
    ClassMismatch(String),
    #[error("inconsistent tower: {0}")]
    InconsistentTower(String),
    #[error("non-split tower: {0}")]
    NonSplitTower(String),
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("quasi-polynomial fit failed: {0}")]
    FitFailed(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
