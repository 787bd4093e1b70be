use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("off-diagonal a[{index}] = {value} must be strictly positive")]
    NonPositiveOffDiagonal { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("lattice size n = {0} is too small (need n >= 2)")]
    LatticeTooSmall(usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("floating point overflow evaluating {0}")]
    Overflow(&'static str),

    #[error("integral of motion order k = {k} outside 1..={n}")]
    BadOrder { k: usize, n: usize },

    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),

    #[error("invalid Lie algebra element: {0}")]
    InvalidAlgebraElement(String),

    #[error("singular group element")]
    SingularGroupElement,

    #[error("matrix is not upper bidiagonal (entry ({row}, {col}) = {value})")]
    NotBidiagonal { row: usize, col: usize, value: f64 },

    #[error("quadrature did not converge: coarse {coarse}, fine {fine}")]
    NonConvergentQuadrature { coarse: f64, fine: f64 },

    #[error("grid too coarse on axis {axis}: {count} < 8 intervals")]
    GridTooCoarse { axis: usize, count: usize },

    #[error("invalid spectral problem: {0}")]
    InvalidProblem(String),

    #[error("eigen solver failed after {iterations} iterations ({converged}/{requested} pairs converged, worst residual {worst_residual:e})")]
    ConvergenceFailure {
        iterations: usize,
        converged: usize,
        requested: usize,
        worst_residual: f64,
    },

    #[error("matrix is not positive definite at pivot {0}")]
    NotPositiveDefinite(usize),

    #[error("basis index {index} out of range (degree {degree})")]
    IndexOutOfRange { index: usize, degree: usize },

    #[error("trivializing section vanishes at sample point ({value:e})")]
    TrivializationVanishes { value: f64 },

    #[error("observable does not preserve the polarization (max |d2f/dp dp| = {max_second_derivative:e})")]
    NotPolarizationPreserving { max_second_derivative: f64 },

    #[error("no non-unitarity witness found")]
    WitnessNotFound,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
