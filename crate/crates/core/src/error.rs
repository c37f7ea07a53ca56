use thiserror::Error;

/// Errors raised by the algebra, extensor and frame constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0}: must lie in 2..=12")]
    InvalidDimension(usize),

    #[error("coefficient array has length {found}, expected {expected} for the given dimension")]
    CoefficientLength { expected: usize, found: usize },

    #[error("grade {grade} out of range for dimension {dim}")]
    GradeOutOfRange { grade: usize, dim: usize },

    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("extensor is singular (scaled |det| = {0:e})")]
    SingularExtensor(f64),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("metric is degenerate (scaled |det| = {0:e})")]
    Degenerate(f64),

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("extensor is not orthogonal (max residual {0:e})")]
    NotOrthogonal(f64),

    #[error("signature mismatch: metric has {metric:?}, eta has {eta:?}")]
    SignatureMismatch { metric: (usize, usize), eta: (usize, usize) },

    #[error("extensor is not eta-orthogonal (max residual {0:e})")]
    NotLorentz(f64),

    #[error("Cayley transform is singular")]
    SingularCayley,

    #[error("deformation coefficient rho[{0}] is zero")]
    ZeroRho(usize),

    #[error("frame vectors are linearly dependent (scaled |det| = {0:e})")]
    DegenerateBasis(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("expected a pure scalar multivector")]
    NotScalar,
}

pub type Result<T, E = GaError> = std::result::Result<T, E>;
