use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field configuration: {0}")]
    InvalidConfig(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a square in Q_p")]
    NotASquare,
    #[error("not a square in the quadratic extension")]
    NotASquareInExtension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector where a nonzero one is required")]
    ZeroVector,
    #[error("operator is not bounded")]
    NotBounded,
    #[error("operator is not adjointable")]
    NotAdjointable,
    #[error("operator is not trace class")]
    NotTraceClass,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("vectors do not form an orthonormal system")]
    NotOrthonormal,
    #[error("anti-linear operator is not involutive")]
    NotInvolutive,
    #[error("subspace basis is not certified orthonormal")]
    NotCertified,
    #[error("malformed input at {pointer}: {message}")]
    Parse { pointer: String, message: String },
}

impl Error {
    pub fn precision(what: impl Into<String>) -> Self {
        Error::PrecisionLoss(what.into())
    }

    pub fn parse(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { pointer: pointer.into(), message: message.into() }
    }

    pub fn is_precision_loss(&self) -> bool {
        matches!(self, Error::PrecisionLoss(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
