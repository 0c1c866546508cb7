use thiserror::Error;

/// Every failure the library can report.
///
/// [`Error::category`] groups the variants the way the command-line tool maps
/// them to exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid degrees: {p} + {q} exceeds dimension {dim}")]
    DegreeOverflow { p: usize, q: usize, dim: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("bivectors are linearly dependent")]
    LinearlyDependent,
    #[error("state has full rank; it is not supported on five orbitals")]
    FullRank,
    #[error("precondition failed: {what} (residual {residual:.3e})")]
    Precondition { what: &'static str, residual: f64 },
    #[error("certificate violated: {what} (residual {residual:.3e})")]
    Certificate { what: &'static str, residual: f64 },
    #[error("unknown class tag `{0}`")]
    UnknownTag(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed state file: {0}")]
    Malformed(String),
    #[error("duplicate configuration {0:?}")]
    DuplicateConfiguration([usize; 3]),
    #[error("indices {0:?} are not strictly increasing in 1..=6")]
    UnsortedIndices(Vec<usize>),
    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
}

/// Coarse grouping of [`Error`] variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Reading, writing or parsing input.
    Input,
    /// The input does not satisfy a mathematical precondition.
    Precondition,
    /// A result failed an internal consistency check.
    Invariant,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Io(_)
            | Error::Malformed(_)
            | Error::DuplicateConfiguration(_)
            | Error::UnsortedIndices(_)
            | Error::VersionMismatch { .. }
            | Error::UnknownTag(_) => ErrorCategory::Input,
            Error::Certificate { .. } => ErrorCategory::Invariant,
            _ => ErrorCategory::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
