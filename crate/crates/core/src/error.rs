use thiserror::Error;

/// Errors raised by the radius computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The centre matrix failed the rank test; its regularity radius is zero.
    #[error("input matrix is numerically singular")]
    SingularInput,
    #[error("eigenvalue iteration did not converge")]
    EigenFailure,
    #[error("dimension {n} exceeds the enumeration cap {cap}")]
    DimensionTooLarge { n: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The answer lies inside the numerical tolerance band.
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("certificate check failed: smallest singular value {sigma_min:e} exceeds {threshold:e}")]
    CertificateFailed { sigma_min: f64, threshold: f64 },
    #[error("matrix is not in the required class: {0}")]
    ClassMismatch(String),
    #[error("rank-one weights must be strictly positive")]
    NonpositiveWeights,
    #[error("radius matrix is identically zero")]
    ZeroRadiusMatrix,
    #[error("radius matrix does not match the tridiagonal structure: {0}")]
    StructureMismatch(String),
    #[error("regularity radius is infinite")]
    InfiniteRadius,
    #[error("orthant frontier exhausted below the upper bracket {upper}")]
    FrontierExhausted { upper: f64 },
    #[error("indeterminate: simplex iteration limit of {0} pivots reached")]
    IterationLimit(usize),
    #[error("matrix generation failed after {0} rejection rounds")]
    GenerationFailed(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
