use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OdduError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("lambda {lambda} is not a pseudoinvolution parameter mod {modulus} (lambda^2 != 1)")]
    NotPseudoinvolution { modulus: u64, lambda: u64 },
    #[error("{value} is not a unit mod {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gram matrix is not anti-Hermitian at ({0},{1})")]
    NotAntiHermitian(usize, usize),
    #[error("generator ({v:?},{x}) does not lie in L_max")]
    GeneratorNotInLmax { v: Vec<u64>, x: u64 },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("space too large for enumeration ({0})")]
    SpaceTooLarge(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid indices: {0}")]
    InvalidIndices(String),
    #[error("payload ({v:?},{x}) is not in the form parameter")]
    PayloadNotInFormParameter { v: Vec<u64>, x: u64 },
    #[error("element is not unitary")]
    NotUnitary,
    #[error("operation requires n = 3, got n = {0}")]
    WrongRank(usize),
    #[error("no x with (v0,x) in the form parameter for v0 = {0:?}")]
    PayloadUnavailable(Vec<u64>),
    #[error("value {0} is not in the ideal spanned by the available atoms")]
    NotInIdeal(u64),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, OdduError>;
