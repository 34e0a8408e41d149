use thiserror::Error;

/// Errors raised by the elliptic machinery, the pendulum solvers and the ODE oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} did not converge within {limit} iterations")]
    NonConvergence { what: &'static str, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate curve: discriminant {discriminant:e} is within tolerance of zero")]
    DegenerateCurve { discriminant: f64 },

    #[error("argument lies on a pole of the Weierstrass function")]
    PoleAtInput,

    #[error("point is not on the curve (residual {residual:e})")]
    NotOnCurve { residual: f64 },

    #[error("unsupported parameter m = {0} (require m < 1)")]
    UnsupportedParameter(f64),

    #[error("coupling constant c must be non-zero")]
    ZeroCoupling,

    #[error("configuration lies on the separatrix; no closed form is available")]
    SeparatrixUnsupported,

    #[error("Jacobi reference solution requires theta0 = 0 (got {0})")]
    UnsupportedInitialAngle(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("initial position and velocity do not commute (commutator norm {norm:e})")]
    NonCommutingInput { norm: f64 },

    #[error("eigenpair {index} (theta = {theta}, omega = {omega}) lies on the separatrix")]
    DegenerateEigenpair { index: usize, theta: f64, omega: f64 },

    #[error("integrator exceeded {0} steps")]
    StepLimitExceeded(usize),

    #[error("integrator step size underflow at t = {0}")]
    StepUnderflow(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
