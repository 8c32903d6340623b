use crate::linalg::ComplexMatrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not an isometry (‖V†V − I‖ = {deviation:.3e})")]
    NotIsometry { deviation: f64 },

    #[error("map is not completely positive (Choi min eigenvalue {min_eigenvalue:.3e})")]
    NotCp { min_eigenvalue: f64 },

    #[error("map is not unital (‖E(I) − I‖ = {deviation:.3e})")]
    NotUnital { deviation: f64 },

    #[error("iteration did not converge within {iterations} steps")]
    NoConvergence { iterations: usize },

    /// Eigenvalue 1 of the shift map is not simple. Every normalized
    /// candidate fixed functional is returned as a density-like matrix.
    #[error("fixed space of the shift map is {multiplicity}-dimensional")]
    DegenerateFixedSpace {
        multiplicity: usize,
        candidates: Vec<ComplexMatrix>,
    },

    #[error("candidate cannot be scaled to a state (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("functional is not shift invariant (residual {residual:.3e})")]
    NotInvariant { residual: f64 },

    #[error("window needs {entries} functional-matrix entries, limit is {limit}")]
    WindowTooLarge { entries: u128, limit: u128 },

    #[error("no Stinespring dilation available: {0}")]
    NoDilation(String),

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
