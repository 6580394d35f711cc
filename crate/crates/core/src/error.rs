use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subspace is not invariant under the operator")]
    NotInvariant,

    #[error("polynomial must be nonzero")]
    ZeroPolynomial,

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("polynomial is not irreducible over Q")]
    NotIrreducible,

    #[error("field has {real} real embeddings out of {degree}: neither totally real nor CM")]
    MixedSignature { real: usize, degree: usize },

    #[error("level must be a positive integer")]
    ZeroLevel,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("rank interval [{lo}, {hi}] is empty")]
    EmptyRankInterval { lo: u64, hi: u64 },

    #[error("{0}")]
    Usage(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("invalid input at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Whether this error reflects a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Invariant(_)
                | Error::NotInvariant
                | Error::DimensionMismatch(_)
                | Error::NotSquare { .. }
        )
    }
}
