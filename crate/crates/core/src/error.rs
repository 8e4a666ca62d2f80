use thiserror::Error;

/// Errors raised across the library.
///
/// Every variant maps to a stable machine-readable kind via [`Error::kind`],
/// which the command-line front end prints on failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("d must not be 0 or 1 (got {0})")]
    InvalidD(i64),
    #[error("{d} is not squarefree (divisible by {square}^2)")]
    NotSquarefree { d: i64, square: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero vector has no projective meaning")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial is reducible over Q")]
    Reducible,
    #[error("polynomial coefficients are not coprime")]
    NotPrimitive,
    #[error("finite part of the system is not a diagonal ideal twist")]
    UnsupportedFinitePart,
    #[error("class group data missing for field {0}")]
    MissingClassData(String),
    #[error("boundary point {witness:?} is not covered by any declared map")]
    CoverageFailure { witness: Vec<f64> },
    #[error("empirical Lipschitz ratio {ratio} exceeds declared constant {declared}")]
    LipschitzExceeded { ratio: f64, declared: f64 },
    #[error("declared constant c_v = {declared} violated at a sampled point (ratio {observed})")]
    NormConstantViolated { declared: f64, observed: f64 },
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("operation unsupported for field of degree {0}")]
    UnsupportedDegree(u32),
    #[error("zeta value missing for field {0}")]
    MissingZeta(String),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("g = {g} is not a proper divisor of e = {e}")]
    InvalidG { g: u32, e: u32 },
    #[error("class number {0} unsupported here")]
    UnsupportedClassNumber(u64),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("search cap {cap} is below the constructive bound {bound}")]
    CapTooSmall { cap: String, bound: String },
    #[error("discriminant scan {scan} is below the certified bound {required}")]
    ScanTooSmall { scan: u64, required: String },
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidD(_) => "InvalidD",
            Error::NotSquarefree { .. } => "NotSquarefree",
            Error::NotPrime(_) => "NotPrime",
            Error::ZeroVector => "ZeroVector",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Reducible => "Reducible",
            Error::NotPrimitive => "NotPrimitive",
            Error::UnsupportedFinitePart => "UnsupportedFinitePart",
            Error::MissingClassData(_) => "MissingClassData",
            Error::CoverageFailure { .. } => "CoverageFailure",
            Error::LipschitzExceeded { .. } => "LipschitzExceeded",
            Error::NormConstantViolated { .. } => "NormConstantViolated",
            Error::NotFundamental(_) => "NotFundamental",
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::MissingZeta(_) => "MissingZeta",
            Error::UnsupportedRegime(_) => "UnsupportedRegime",
            Error::InvalidG { .. } => "InvalidG",
            Error::UnsupportedClassNumber(_) => "UnsupportedClassNumber",
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::CapTooSmall { .. } => "CapTooSmall",
            Error::ScanTooSmall { .. } => "ScanTooSmall",
            Error::DegenerateGrid(_) => "DegenerateGrid",
            Error::Parse(_) => "Parse",
            Error::Overflow(_) => "Overflow",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Internal(_) => "Internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
