//! Bures-Wasserstein distance, transport maps and geodesics on the full SPD cone.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::spd::{psd_sqrt, relative_commutator, symmetric_eigenvalues, SpdMatrix, SymmetricMatrix};

/// Relative commutator norm below which two matrices are treated as commuting.
pub const COMMUTE_TOL: f64 = 1e-10;

/// Deficit (relative to `tr A + tr B`) that a squared distance may show
/// below zero before it is reported as an error instead of clamped.
pub const NEGATIVE_CLAMP_TOL: f64 = 1e-10;

fn same_dim(a: &SpdMatrix, b: &SpdMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

/// Clamps a squared distance at zero when it is negative only by round-off.
pub(crate) fn clamp_sq(value: f64, scale: f64) -> Result<f64> {
    if value >= 0.0 {
        return Ok(value);
    }
    let allowed = NEGATIVE_CLAMP_TOL * scale;
    if -value <= allowed {
        Ok(0.0)
    } else {
        Err(Error::NegativeDistance { value, allowed })
    }
}

/// `tr((A^{1/2} B A^{1/2})^{1/2})`, the fidelity term.
pub fn fidelity(a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    same_dim(a, b)?;
    let s = a.sqrt();
    let m = s.as_matrix() * b.as_matrix() * s.as_matrix();
    let m = SymmetricMatrix::new(m)?;
    Ok(symmetric_eigenvalues(m.as_matrix()).iter().map(|l| l.max(0.0).sqrt()).sum())
}

/// `d_B²(A, B) = tr A + tr B − 2 tr((A^{1/2} B A^{1/2})^{1/2})`.
pub fn bures_distance_sq(a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    let f = fidelity(a, b)?;
    let scale = a.trace() + b.trace();
    clamp_sq(scale - 2.0 * f, scale)
}

pub fn bures_distance(a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    Ok(bures_distance_sq(a, b)?.sqrt())
}

/// The optimal transport map `T_{A→B}`, an SPD matrix with `T A T = B`.
#[derive(Clone, Debug)]
pub struct TransportMap {
    matrix: SpdMatrix,
}

impl TransportMap {
    pub fn matrix(&self) -> &SpdMatrix {
        &self.matrix
    }

    /// `‖T A T − B‖_F / ‖B‖_F`.
    pub fn defect(&self, a: &SpdMatrix, b: &SpdMatrix) -> f64 {
        let t = self.matrix.as_matrix();
        let tat = t * a.as_matrix() * t;
        (tat - b.as_matrix()).norm() / b.frobenius_norm()
    }
}

/// `T_{A→B} = A^{-1/2} (A^{1/2} B A^{1/2})^{1/2} A^{-1/2}`.
pub fn transport_map(a: &SpdMatrix, b: &SpdMatrix) -> Result<TransportMap> {
    same_dim(a, b)?;
    let s = a.sqrt();
    let r = a.inv_sqrt();
    let mid = psd_sqrt(&(s.as_matrix() * b.as_matrix() * s.as_matrix()));
    let t = r.as_matrix() * mid * r.as_matrix();
    Ok(TransportMap {
        matrix: SpdMatrix::from_matrix(t)?,
    })
}

pub(crate) fn check_unit_interval(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange {
            name: "t",
            value: t,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

/// Bures geodesic `γ(t) = ((1−t)I + tT) A ((1−t)I + tT)` with the transport
/// computed once.
#[derive(Clone, Debug)]
pub struct GeodesicCurve {
    start: SpdMatrix,
    end: SpdMatrix,
    transport: TransportMap,
}

impl GeodesicCurve {
    pub fn new(start: SpdMatrix, end: SpdMatrix) -> Result<Self> {
        let transport = transport_map(&start, &end)?;
        Ok(Self {
            start,
            end,
            transport,
        })
    }

    pub fn start(&self) -> &SpdMatrix {
        &self.start
    }

    pub fn end(&self) -> &SpdMatrix {
        &self.end
    }

    pub fn transport(&self) -> &TransportMap {
        &self.transport
    }

    /// `γ(t)` as a symmetric matrix, without the SPD validation pass.
    pub fn evaluate_symmetric(&self, t: f64) -> Result<SymmetricMatrix> {
        check_unit_interval(t)?;
        let n = self.start.dim();
        let w = DMatrix::identity(n, n) * (1.0 - t) + self.transport.matrix.as_matrix() * t;
        SymmetricMatrix::new(&w * self.start.as_matrix() * &w)
    }

    pub fn evaluate(&self, t: f64) -> Result<SpdMatrix> {
        SpdMatrix::new(self.evaluate_symmetric(t)?)
    }

    /// `γ'(0) = (T − I)A + A(T − I)`.
    pub fn initial_velocity(&self) -> SymmetricMatrix {
        let n = self.start.dim();
        let d = self.transport.matrix.as_matrix() - DMatrix::identity(n, n);
        let a = self.start.as_matrix();
        SymmetricMatrix::symmetrized(&d * a + a * &d)
    }
}

pub fn geodesic_eval(curve: &GeodesicCurve, t: f64) -> Result<SpdMatrix> {
    curve.evaluate(t)
}

/// `((1−t)A^{1/2} + tB^{1/2})²` for commuting `A`, `B`.
pub fn commuting_geodesic_eval(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    same_dim(a, b)?;
    check_unit_interval(t)?;
    let relative = relative_commutator(a.as_matrix(), b.as_matrix());
    if relative > COMMUTE_TOL {
        return Err(Error::NotCommuting { relative });
    }
    let h = a.sqrt().as_matrix() * (1.0 - t) + b.sqrt().as_matrix() * t;
    SpdMatrix::from_matrix(&h * &h)
}

/// Squared 2-Wasserstein distance between `N(m0, K0)` and `N(m1, K1)`.
pub fn gaussian_w2_sq(m0: &DVector<f64>, k0: &SpdMatrix, m1: &DVector<f64>, k1: &SpdMatrix) -> Result<f64> {
    for m in [m0, m1] {
        if m.len() != k0.dim() {
            return Err(Error::DimensionMismatch {
                expected: k0.dim(),
                got: m.len(),
            });
        }
    }
    Ok((m0 - m1).norm_squared() + bures_distance_sq(k0, k1)?)
}
