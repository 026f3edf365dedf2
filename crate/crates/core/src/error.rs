use thiserror::Error;

use crate::spd::SpdMatrix;

/// Errors raised by the geometry and solver routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not positive definite (min eigenvalue {min}, max eigenvalue {max})")]
    NotPositiveDefinite { min: f64, max: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parameter {name} = {value} is outside [{lo}, {hi}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("matrices do not commute (relative commutator norm {relative})")]
    NotCommuting { relative: f64 },

    #[error("squared distance is negative beyond round-off: {value} (allowed deficit {allowed})")]
    NegativeDistance { value: f64, allowed: f64 },

    #[error("U factor violates the determinant gauge: log det U = {log_det}")]
    GaugeViolation { log_det: f64 },

    #[error("matrix is not a normalized Kronecker product (relative reconstruction error {relative})")]
    NotInModel { relative: f64 },

    #[error("point does not lie on the {leaf} leaf")]
    NotOnLeaf { leaf: &'static str },

    #[error("factor pairs are not simultaneously diagonalizable (relative defect {relative})")]
    NotSimultaneouslyDiagonalizable { relative: f64 },

    #[error("closed-form radicand is negative beyond round-off: {radicand} (T^2 = {t_sq})")]
    RadicandDeficit { radicand: f64, t_sq: f64 },

    #[error("tangent direction H_U has nonzero trace {trace}")]
    TraceNotZero { trace: f64 },

    #[error(
        "residual norm {residual_norm} disagrees with the direct leaf check (leaf verdict: {leaf}, tolerance {tolerance})"
    )]
    InconsistentVerdict {
        residual_norm: f64,
        leaf: bool,
        tolerance: f64,
    },

    #[error("coordinate {index} is not strictly positive ({value})")]
    NonPositiveCoordinate { index: usize, value: f64 },

    #[error("{solver} did not converge after {iterations} iterations (residual {residual:e}){}",
        .gap.map(|g| format!(", spectral gap estimate {g:.3e}")).unwrap_or_default())]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
        gap: Option<f64>,
    },

    #[error("barycenter fixed point did not converge after {iterations} iterations (residual {residual:e})")]
    BarycenterNoConvergence {
        iterations: usize,
        residual: f64,
        best: Box<SpdMatrix>,
    },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
