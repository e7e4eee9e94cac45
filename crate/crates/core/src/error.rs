use core::fmt;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two operands live over different dimensions.
    DimensionMismatch { expected: usize, found: usize },
    /// The ambient dimension is zero, odd where evenness is required, or too large.
    InvalidDimension(usize),
    /// A basis index outside `1..=n`.
    IndexOutOfRange { index: usize, dimension: usize },
    /// A truncated series or iteration did not settle within its cap.
    NonConvergence { operation: &'static str, iterations: usize },
    /// The body spectrum of a matrix argument is not inside the series' disc.
    OutsideRadius { primitive: &'static str, spectral_radius: f64, radius: f64 },
    /// A matrix that had to be inverted is singular at its body.
    Singular(&'static str),
    /// A square root or logarithm was requested off the positive real axis.
    NotPositive(&'static str),
    /// An antisymmetric matrix was expected.
    NotAntisymmetric { max_violation: f64 },
    /// The Clifford commutator with a degree-1 element left degree 1.
    OutsideDegreeOne { max_violation: f64 },
    /// A curvature tensor failed one of its algebraic symmetries.
    CurvatureSymmetry { symmetry: &'static str, max_violation: f64 },
    /// Two evaluation routes of an identity disagreed.
    IdentityMismatch { identity: &'static str, max_error: f64, tolerance: f64 },
    /// A scalar parameter is outside its admissible range.
    InvalidParameter(&'static str),
    /// Kernel expansion without any non-zero term.
    EmptyKernel,
    /// Getzler order above the dimension.
    OrderTooLarge { order: i32, dimension: usize },
    /// Plain Getzler rescaling of a kernel carrying the Gaussian prefactor.
    PrefactorRequiresParabolic,
    /// A time-independent kernel germ was required.
    TimeDependentKernel,
    /// The requested dimension is too large for numerical integration.
    InfeasibleDimension(usize),
    /// Gauss-Hermite order too small for the claimed exactness.
    UnderResolved { required: usize, order: usize },
    /// A quantity that must be real carries an imaginary part.
    ResidualImaginary(f64),
    /// A spectral sum could not reach its tail bound.
    TailBound { terms: usize, bound: f64 },
    /// A convergence study did not show decay.
    NoConvergence { fitted_order: f64 },
    /// A limit study converged to the wrong value.
    WrongLimit { error: f64, tolerance: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidDimension(n) => write!(f, "invalid dimension {n}"),
            Error::IndexOutOfRange { index, dimension } => {
                write!(f, "index {index} outside 1..={dimension}")
            }
            Error::NonConvergence { operation, iterations } => {
                write!(f, "{operation} did not converge within {iterations} iterations")
            }
            Error::OutsideRadius { primitive, spectral_radius, radius } => write!(
                f,
                "{primitive}: spectral radius {spectral_radius:.6} not inside convergence radius {radius:.6}"
            ),
            Error::Singular(what) => write!(f, "singular matrix in {what}"),
            Error::NotPositive(what) => write!(f, "{what}: argument not positive"),
            Error::NotAntisymmetric { max_violation } => {
                write!(f, "matrix is not antisymmetric (violation {max_violation:e})")
            }
            Error::OutsideDegreeOne { max_violation } => write!(
                f,
                "commutator has components outside degree 1 (size {max_violation:e})"
            ),
            Error::CurvatureSymmetry { symmetry, max_violation } => {
                write!(f, "curvature tensor violates {symmetry} (by {max_violation:e})")
            }
            Error::IdentityMismatch { identity, max_error, tolerance } => write!(
                f,
                "{identity}: routes differ by {max_error:e} (tolerance {tolerance:e})"
            ),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::EmptyKernel => f.write_str("kernel expansion has no non-zero term"),
            Error::OrderTooLarge { order, dimension } => {
                write!(f, "Getzler order {order} exceeds dimension {dimension}")
            }
            Error::PrefactorRequiresParabolic => {
                f.write_str("Gaussian prefactor only transforms under parabolic rescaling")
            }
            Error::TimeDependentKernel => f.write_str("kernel germ depends on t"),
            Error::InfeasibleDimension(n) => {
                write!(f, "numerical integration over spin({n}) is not supported")
            }
            Error::UnderResolved { required, order } => write!(
                f,
                "Gauss-Hermite order {order} below {required} required for exactness"
            ),
            Error::ResidualImaginary(im) => write!(f, "residual imaginary part {im:e}"),
            Error::TailBound { terms, bound } => {
                write!(f, "spectral tail bound {bound:e} after {terms} terms")
            }
            Error::NoConvergence { fitted_order } => {
                write!(f, "no convergence observed (fitted order {fitted_order:.3})")
            }
            Error::WrongLimit { error, tolerance } => {
                write!(f, "limit off by {error:e} (tolerance {tolerance:e})")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
