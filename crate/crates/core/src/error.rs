use core::fmt;

/// Every failure the analysis engines can report.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Non-finite entries, malformed shapes or out-of-range tolerances.
    InvalidInput(&'static str),
    DimensionMismatch { expected: usize, found: usize },
    NotHermitian,
    /// The vectors do not span the ambient space.
    NotAFrame,
    NotTight { frame: usize },
    NotNormalized { norm: f64 },
    ZeroVector,
    InvalidShape { dim: usize, count: usize },
    TooFewColumns,
    ZeroCoherence,
    NotSpanning,
    Inadmissible { product: usize, threshold: f64 },
    TooFewFrames { found: usize },
    BudgetExceeded(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotHermitian => f.write_str("matrix is not Hermitian"),
            Error::NotAFrame => f.write_str("vectors do not span the space (not a frame)"),
            Error::NotTight { frame } => write!(f, "frame #{frame} is not tight"),
            Error::NotNormalized { norm } => write!(f, "state is not normalized (norm {norm})"),
            Error::ZeroVector => f.write_str("zero vector"),
            Error::InvalidShape { dim, count } => {
                write!(f, "cannot build {count} Parseval vectors in dimension {dim}")
            }
            Error::TooFewColumns => f.write_str("at least two columns are required"),
            Error::ZeroCoherence => f.write_str("coherence is zero; the spark bound is infinite"),
            Error::NotSpanning => f.write_str("selected vectors do not span the space"),
            Error::Inadmissible { product, threshold } => {
                write!(f, "|S||T| = {product} is not below the admissibility threshold {threshold}")
            }
            Error::TooFewFrames { found } => write!(f, "need at least two frames, got {found}"),
            Error::BudgetExceeded(what) => write!(f, "enumeration budget exceeded: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
