use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid physical constants: {0}")]
    InvalidConstants(String),
    #[error("invalid evolution parameters: {0}")]
    InvalidParams(String),
    #[error("field has {got} samples, grid expects {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },
    #[error("fields live on incompatible grids")]
    GridMismatch,
    #[error("state is not normalized (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },
    #[error("state is not localized: mass {boundary_mass:e} within L/8 of the boundary exceeds 1e-6")]
    NotLocalized { boundary_mass: f64 },
    #[error("unsupported configuration: {0}")]
    Unsupported(&'static str),
    #[error("need at least 3 snapshots, got {got}")]
    TooFewSnapshots { got: usize },
    #[error("snapshots are not equally spaced in time (interval {index})")]
    NonUniformSpacing { index: usize },
    #[error("spectral mode {mode} is singular: zero denominator with nonzero coefficient")]
    SingularMode { mode: i64 },
    #[error("final time {time} is not an integer multiple of dt = {dt}")]
    NotIntegerMultiple { time: f64, dt: f64 },
    #[error("lagrangian is not finite near the evaluation point")]
    NonFiniteLagrangian,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("velocity inversion did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("singular Hessian in velocity inversion")]
    SingularHessian,
    #[error("dt/dtau must be positive, got {0}")]
    NonPositiveTdot(f64),
    #[error("gauge function is not increasing at tau = {tau}")]
    GaugeNotMonotone { tau: f64 },
    #[error("gauge maps onto t in [{start}, {end}], outside the trajectory range [{t_min}, {t_max}]")]
    GaugeRangeMismatch { start: f64, end: f64, t_min: f64, t_max: f64 },
    #[error("time is not strictly increasing at sample {index}")]
    NonMonotoneTime { index: usize },
    #[error("t = {t} is outside the sampled range [{t_min}, {t_max}]")]
    OutOfRange { t: f64, t_min: f64, t_max: f64 },
    #[error("speed {speed} is not below c = {c}")]
    Superluminal { speed: f64, c: f64 },
}
