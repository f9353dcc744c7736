use std::path::PathBuf;

use crate::solver::RegimeReport;
use crate::verification::ResidualReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("density jump (rho_w - rho_i)/rho_w is zero; enable classical mode to accept it")]
    DegenerateDensityJump,

    #[error("beta = epsilon*d*rho_i*(c_w - c_i) is zero (N = 0); enable the zero-beta mode to accept it")]
    DegenerateBeta,

    #[error("config {path}: line {line}: {reason}")]
    Config {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("non-finite input to `{function}`")]
    NonFiniteInput { function: &'static str },

    #[error("`{function}` is not defined at y = {y}")]
    DomainError { function: &'static str, y: f64 },

    #[error("`{function}` overflows the double range at y = {y} (ln value {ln_value})")]
    OverflowUnrepresentable {
        function: &'static str,
        y: f64,
        ln_value: f64,
    },

    #[error("no root found in (0, {scan_max}]: {}", report.summary())]
    NoRootFound {
        scan_max: f64,
        report: Box<RegimeReport>,
    },

    #[error("root polish in [{lo}, {hi}] stopped with residual {residual:e} above tolerance {tolerance:e}")]
    ToleranceNotReached {
        lo: f64,
        hi: f64,
        residual: f64,
        tolerance: f64,
    },

    #[error("uniqueness violated: expected exactly one root in (0, {upper}), found {found:?}")]
    UniquenessViolation { upper: f64, found: Vec<f64> },

    #[error("front coefficient decreased between h0 = {h0_lo} (xi = {xi_lo}) and h0 = {h0_hi} (xi = {xi_hi})")]
    MonotonicityViolation {
        h0_lo: f64,
        xi_lo: f64,
        h0_hi: f64,
        xi_hi: f64,
    },

    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),

    #[error("x = {x} lies outside the {region} region at t = {t} (front at {front})")]
    OutOfPhaseRegion {
        region: &'static str,
        x: f64,
        t: f64,
        front: f64,
    },

    #[error("verification failed: {component}")]
    VerificationFailed {
        component: String,
        report: Box<ResidualReport>,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
