use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the numerical kernels and the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is numerically singular (rank {rank} < {n})")]
    SingularMatrix { rank: usize, n: usize },

    #[error("QR iteration did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("spectra have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has a non-finite entry")]
    NonFinite,

    #[error("matrix norm {norm:e} exceeds the scaling budget of the exponential")]
    Overflow { norm: f64 },

    #[error("matrix has no principal logarithm: eigenvalue {eigenvalue} lies on (-inf, 0]")]
    NotInK { eigenvalue: Complex64 },

    #[error("matrix has no real logarithm: {reason}")]
    NotInKStar { reason: String },

    #[error("eigenvalue on the closed negative real axis: {value}")]
    NegativeAxisEigenvalue { value: Complex64 },

    #[error("defective negative eigenvalue {eigenvalue} is not supported")]
    UnsupportedJordanStructure { eigenvalue: f64 },

    #[error("{value} is not an eigenvalue within the cluster tolerance")]
    NotAnEigenvalue { value: f64 },

    #[error("rank sequence at {eigenvalue} is not convex; Jordan structure is numerically undetermined")]
    InconsistentRankSequence { eigenvalue: f64 },

    #[error("linear map on matrix space is not bijective")]
    SingularMap,

    #[error("image of the identity is not a positive scalar matrix (residual {residual:e}, scale {scale})")]
    NotScalarImage { residual: f64, scale: f64 },

    #[error("recovered conjugator is numerically singular")]
    DegenerateRecovery,

    #[error("angle {theta} has sin(theta) = 0")]
    DegenerateAngle { theta: f64 },

    #[error("2x2 block has non-positive determinant {det}")]
    NonpositiveDeterminant { det: f64 },

    #[error("rejection sampling stalled after {attempts} attempts")]
    SampleBudgetExceeded { attempts: usize },

    #[error("requested distance {eps:e} is below what the membership tolerances can resolve")]
    ToleranceFloor { eps: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
