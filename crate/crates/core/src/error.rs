use thiserror::Error;

/// Errors raised by the geometry kernel, the solvers and the monitors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("invalid angle grid: {0}")]
    InvalidGrid(String),

    #[error("length mismatch: expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// `S_θθ + S` fell to or below the convexity floor on `[theta_lo, theta_hi]`.
    #[error("convexity lost at t = {t} on theta in [{theta_lo}, {theta_hi}] (min radius of curvature {min_radius})")]
    ConvexityLost {
        t: f64,
        theta_lo: f64,
        theta_hi: f64,
        min_radius: f64,
    },

    #[error("origin is not strictly inside the curve")]
    OriginNotInterior,

    #[error("curve is not strictly convex: {0}")]
    NotConvex(String),

    #[error("adjacent vertices {index} and {next} collide")]
    DegenerateEdge { index: usize, next: usize },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("initial radius must be positive, got {0}")]
    InvalidInitialRadius(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("forcing sample at t = {t} is not finite")]
    InvalidForcing { t: f64 },

    #[error("bracket violated at t = {t}: r = {r}, lower = {lower}, upper = {upper}")]
    BracketViolation {
        t: f64,
        r: f64,
        lower: f64,
        upper: f64,
    },

    #[error("time step {dt} exceeds the CFL bound {bound}")]
    CflViolation { dt: f64, bound: f64 },

    #[error("time {t} outside the available range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("time {t} is past the extinction time {t_max}")]
    OutOfDomain { t: f64, t_max: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("snapshot schedules differ: {0}")]
    SnapshotMismatch(String),
}

impl Error {
    /// Process exit status for a run that failed with this error: 1 for bad
    /// input or configuration, 2 for a breached runtime invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BracketViolation { .. }
            | Error::SnapshotMismatch(_)
            | Error::OutOfRange { .. }
            | Error::InsufficientData(_)
            | Error::DegenerateEdge { .. }
            | Error::InvalidMetric(_) => 2,
            _ => 1,
        }
    }

    /// Variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFinite { .. } => "NonFinite",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ConvexityLost { .. } => "ConvexityLost",
            Error::OriginNotInterior => "OriginNotInterior",
            Error::NotConvex(_) => "NotConvex",
            Error::DegenerateEdge { .. } => "DegenerateEdge",
            Error::InvalidMetric(_) => "InvalidMetric",
            Error::InvalidInitialRadius(_) => "InvalidInitialRadius",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::InvalidForcing { .. } => "InvalidForcing",
            Error::BracketViolation { .. } => "BracketViolation",
            Error::CflViolation { .. } => "CflViolation",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::OutOfDomain { .. } => "OutOfDomain",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::InsufficientData(_) => "InsufficientData",
            Error::SnapshotMismatch(_) => "SnapshotMismatch",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_finite(values: &[f64], what: &'static str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { what, index }),
        None => Ok(()),
    }
}
