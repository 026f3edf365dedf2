use crate::error::{Error, Result};
use crate::spd::SymmetricMatrix;

/// Pullback of the Bures metric through `(U, V) ↦ V ⊗ U` at `(I, sI)`:
/// `(n/4)(s‖H_U‖² + ‖H_V‖²/s)`, for `tr H_U = 0`.
pub fn pullback_metric_isotropic(n: usize, s: f64, h_u: &SymmetricMatrix, h_v: &SymmetricMatrix) -> Result<f64> {
    for m in [h_u, h_v] {
        if m.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.dim() });
        }
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::ParameterOutOfRange {
            name: "s",
            value: s,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let hu = h_u.frobenius_norm();
    let trace = h_u.trace();
    if trace.abs() > 1e-12 * hu.max(f64::MIN_POSITIVE) {
        return Err(Error::TraceNotZero { trace });
    }
    let hv = h_v.frobenius_norm();
    Ok(n as f64 / 4.0 * (s * hu * hu + hv * hv / s))
}
