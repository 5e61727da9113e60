use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("rank condition fails: bracket flag stalls at dimension {reached} of {dim} (depth {depth})")]
    RankConditionFailure { reached: usize, dim: usize, depth: usize },

    #[error("coordinates are not privileged: coordinate orders {orders:?} differ from weights {weights:?}")]
    NotPrivileged { orders: Vec<Option<u32>>, weights: Vec<u32> },

    #[error("approximating fields are linearly dependent (sub-Riemannian, not almost-Riemannian)")]
    DegenerateApproximation,

    #[error("bracket of degree {degree} exceeds the closure bound {bound}")]
    DegreeBoundExceeded { degree: u32, bound: u32 },

    #[error("polynomial degree {degree} exceeds the configured cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },

    #[error("field does not normalize the subalgebra")]
    NotInvariant,

    #[error("no graded frame: {0}")]
    GradedFrameUnavailable(String),

    #[error("point is not on the corank-one stratum (corank {corank})")]
    NotOnZ1 { corank: usize },

    #[error("the determinant is not a submersion at the point")]
    DegenerateZ1,

    #[error("field is not in triangular form for the given weights")]
    NonTriangularField,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
