//! Fixed-chart departure moduli: the distance of `H_t` and of `H_t ∘ H_t` to
//! rank one.

use nalgebra::{DMatrix, DVector, Matrix3};
use serde::{Deserialize, Serialize};

use super::chart::SqrtProfile;
use crate::bures::check_unit_interval;
use crate::error::{Error, Result};
use crate::spd::{psd_sqrt, symmetric_eigenvalues};

/// Relative radicand deficit (against `T²`) clamped to zero in the closed form.
pub const RADICAND_TOL: f64 = 1e-12;

/// Gram determinant `‖x‖²‖y‖² − ⟨x,y⟩²` via Lagrange's identity. It vanishes
/// exactly when `y` is a bitwise copy of `x`.
fn gram_defect(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            let w = x[p] * y[q] - x[q] * y[p];
            s += w * w;
        }
    }
    s
}

/// `A = ‖a‖²`, `B = ‖b‖²`, `C = ‖c‖²`, `D = ‖d‖²`, `ρ = ⟨a,c⟩`, `σ = ⟨b,d⟩`,
/// together with the Gram defects `AC − ρ²` and `BD − σ²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DepartureCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub rho: f64,
    pub sigma: f64,
    ac_defect: f64,
    bd_defect: f64,
}

impl DepartureCoefficients {
    /// From raw scalars; the defects are formed as `AC − ρ²`.
    pub fn new(a: f64, b: f64, c: f64, d: f64, rho: f64, sigma: f64) -> Result<Self> {
        for (name, v) in [("A", a), ("B", b), ("C", c), ("D", d)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::ParameterOutOfRange {
                    name,
                    value: v,
                    lo: 0.0,
                    hi: f64::INFINITY,
                });
            }
        }
        let check = |defect: f64, scale: f64, name| {
            if defect < -1e-12 * scale {
                Err(Error::ParameterOutOfRange {
                    name,
                    value: defect,
                    lo: 0.0,
                    hi: f64::INFINITY,
                })
            } else {
                Ok(defect.max(0.0))
            }
        };
        let ac_defect = check(a * c - rho * rho, a * c, "AC - rho^2")?;
        let bd_defect = check(b * d - sigma * sigma, b * d, "BD - sigma^2")?;
        Ok(Self {
            a,
            b,
            c,
            d,
            rho,
            sigma,
            ac_defect,
            bd_defect,
        })
    }

    pub fn from_profile(p: &SqrtProfile) -> Self {
        Self {
            a: p.a.norm_squared(),
            b: p.b.norm_squared(),
            c: p.c.norm_squared(),
            d: p.d.norm_squared(),
            rho: p.a.dot(&p.c),
            sigma: p.b.dot(&p.d),
            ac_defect: gram_defect(&p.a, &p.c),
            bd_defect: gram_defect(&p.b, &p.d),
        }
    }

    pub fn ac_defect(&self) -> f64 {
        self.ac_defect
    }

    pub fn bd_defect(&self) -> f64 {
        self.bd_defect
    }

    /// `T(t) = (1−t)²AB + 2t(1−t)ρσ + t²CD`.
    pub fn t_of(&self, t: f64) -> f64 {
        let s = 1.0 - t;
        s * s * self.a * self.b + 2.0 * t * s * self.rho * self.sigma + t * t * self.c * self.d
    }

    /// `Δ(t) = t²(1−t)²(AC−ρ²)(BD−σ²)`.
    pub fn delta_of(&self, t: f64) -> f64 {
        let w = t * (1.0 - t);
        w * w * self.ac_defect * self.bd_defect
    }
}

/// `δ_geo(t)`, the smaller singular value of the rank-≤2 matrix `H_t`.
///
/// Evaluated as `δ² = 2Δ / (T + √(T² − 4Δ))`, algebraically equal to
/// `(T − √(T² − 4Δ))/2` but free of cancellation when `Δ ≪ T²`.
pub fn delta_geo_closed_form(coeffs: &DepartureCoefficients, t: f64) -> Result<f64> {
    check_unit_interval(t)?;
    let tt = coeffs.t_of(t);
    let delta = coeffs.delta_of(t);
    if delta == 0.0 {
        return Ok(0.0);
    }
    let t_sq = tt * tt;
    let mut radicand = t_sq - 4.0 * delta;
    if radicand < 0.0 {
        if -radicand > RADICAND_TOL * t_sq {
            return Err(Error::RadicandDeficit { radicand, t_sq });
        }
        radicand = 0.0;
    }
    let d2 = 2.0 * delta / (tt + radicand.sqrt());
    Ok(d2.sqrt())
}

fn sorted_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Second singular value of `h` by a full SVD.
pub fn delta_geo_svd(h: &DMatrix<f64>) -> f64 {
    sorted_singular_values(h).get(1).copied().unwrap_or(0.0)
}

/// `(AC − ρ²)(BD − σ²)/(AB)`, the coefficient of `t²` in `δ_geo(t)²`.
pub fn delta_geo_asymptote(coeffs: &DepartureCoefficients) -> f64 {
    coeffs.ac_defect * coeffs.bd_defect / (coeffs.a * coeffs.b)
}

/// t-independent parts of the factorization `H_t ∘ H_t = P_t Q_tᵀ`.
///
/// With `P₀ = [a∘a, a∘c, c∘c]` and weights `w(t) = ((1−t), √(2t(1−t)), t)`,
/// `P_t = P₀ diag(w)`. The nonzero squared singular values of `M_t` are the
/// eigenvalues of `Γ_t`, whose elementary symmetric functions come from the
/// Gram matrices of `P₀`, `Q₀` and of their column wedges (Cauchy–Binet).
#[derive(Clone, Debug)]
pub struct DiagDeparture {
    p0: DMatrix<f64>,
    q0: DMatrix<f64>,
    gram_p: Matrix3<f64>,
    gram_q: Matrix3<f64>,
    wedge_p: Matrix3<f64>,
    wedge_q: Matrix3<f64>,
    det_p: f64,
    det_q: f64,
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn wedge_gram(m: &DMatrix<f64>) -> Matrix3<f64> {
    let n = m.nrows();
    let mut g = Matrix3::zeros();
    for p in 0..n {
        for q in p + 1..n {
            let w: [f64; 3] = PAIRS.map(|(i, j)| m[(p, i)] * m[(q, j)] - m[(q, i)] * m[(p, j)]);
            for x in 0..3 {
                for y in 0..3 {
                    g[(x, y)] += w[x] * w[y];
                }
            }
        }
    }
    g
}

/// `det(MᵀM) = Σ_{p<q<r} det(rows p,q,r)²`.
fn triple_gram_det(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            // Minors on rows (p, q) are shared across r.
            let m01 = m[(p, 0)] * m[(q, 1)] - m[(q, 0)] * m[(p, 1)];
            let m02 = m[(p, 0)] * m[(q, 2)] - m[(q, 0)] * m[(p, 2)];
            let m12 = m[(p, 1)] * m[(q, 2)] - m[(q, 1)] * m[(p, 2)];
            for r in q + 1..n {
                let det = m[(r, 2)] * m01 - m[(r, 1)] * m02 + m[(r, 0)] * m12;
                s += det * det;
            }
        }
    }
    s
}

fn factor_base(x: &DVector<f64>, y: &DVector<f64>) -> DMatrix<f64> {
    let n = x.len();
    DMatrix::from_fn(n, 3, |p, j| match j {
        0 => x[p] * x[p],
        1 => x[p] * y[p],
        _ => y[p] * y[p],
    })
}

fn gram3(m: &DMatrix<f64>) -> Matrix3<f64> {
    let g = m.transpose() * m;
    Matrix3::from_fn(|i, j| g[(i, j)])
}

fn weights(t: f64) -> [f64; 3] {
    [1.0 - t, (2.0 * t * (1.0 - t)).sqrt(), t]
}

impl DiagDeparture {
    pub fn new(profile: &SqrtProfile) -> Self {
        let p0 = factor_base(&profile.a, &profile.c);
        let q0 = factor_base(&profile.b, &profile.d);
        Self {
            gram_p: gram3(&p0),
            gram_q: gram3(&q0),
            wedge_p: wedge_gram(&p0),
            wedge_q: wedge_gram(&q0),
            det_p: triple_gram_det(&p0),
            det_q: triple_gram_det(&q0),
            p0,
            q0,
        }
    }

    /// `P_t` (`n × 3`).
    pub fn p_t(&self, t: f64) -> DMatrix<f64> {
        let w = weights(t);
        DMatrix::from_fn(self.p0.nrows(), 3, |p, j| self.p0[(p, j)] * w[j])
    }

    /// `Q_t` (`n × 3`).
    pub fn q_t(&self, t: f64) -> DMatrix<f64> {
        let w = weights(t);
        DMatrix::from_fn(self.q0.nrows(), 3, |p, j| self.q0[(p, j)] * w[j])
    }

    /// `δ_diag(t) = √(λ₂ + λ₃)` for the eigenvalues `λ₁ ≥ λ₂ ≥ λ₃` of `Γ_t`.
    pub fn at(&self, t: f64) -> Result<f64> {
        check_unit_interval(t)?;
        let w = Matrix3::from_diagonal(&weights(t).into());
        let [w1, w2, w3] = weights(t);
        let w2d = Matrix3::from_diagonal(&[w1 * w2, w1 * w3, w2 * w3].into());
        let e2 = (w2d * self.wedge_p * w2d * w2d * self.wedge_q * w2d).trace();
        if e2 <= 0.0 {
            return Ok(0.0);
        }
        let scale = (w1 * w2 * w3).powi(2);
        let e3 = scale * self.det_p * scale * self.det_q;
        let gp = w * self.gram_p * w;
        let gq = w * self.gram_q * w;
        let lambda1 = largest_gamma_eigenvalue(&gp, &gq);
        // e₂ = λ₁(λ₂+λ₃) + λ₂λ₃ and e₃ = λ₁λ₂λ₃.
        let d2 = (e2 - e3 / lambda1) / lambda1;
        Ok(d2.max(0.0).sqrt())
    }

    /// `Γ_t = (P_tᵀP_t + εI)^{1/2} (Q_tᵀQ_t) (P_tᵀP_t + εI)^{1/2}` with
    /// `ε = 1e-14 · tr(P_tᵀP_t)`.
    pub fn gamma_t(&self, t: f64) -> Result<DMatrix<f64>> {
        check_unit_interval(t)?;
        let pt = self.p_t(t);
        let qt = self.q_t(t);
        let mut a = pt.transpose() * &pt;
        let eps = 1e-14 * a.trace();
        for i in 0..3 {
            a[(i, i)] += eps;
        }
        let s = psd_sqrt(&a);
        let g = &s * (qt.transpose() * qt) * &s;
        Ok((&g + g.transpose()) * 0.5)
    }
}

fn largest_gamma_eigenvalue(gp: &Matrix3<f64>, gq: &Matrix3<f64>) -> f64 {
    let gp = DMatrix::from_fn(3, 3, |i, j| gp[(i, j)]);
    let gq = DMatrix::from_fn(3, 3, |i, j| gq[(i, j)]);
    let s = psd_sqrt(&gp);
    let g = &s * gq * &s;
    symmetric_eigenvalues(&((&g + g.transpose()) * 0.5))[0]
}

/// `δ_diag(t)`, the Frobenius distance of `M_t = H_t ∘ H_t` to rank one.
pub fn delta_diag(profile: &SqrtProfile, t: f64) -> Result<f64> {
    DiagDeparture::new(profile).at(t)
}

/// The same modulus read off the literal regularized `Γ_t`:
/// `√(tr Γ_t − λ₁(Γ_t))`. Its absolute accuracy is limited to
/// `√(ε_mach) · ‖M_t‖`, so it is kept as a cross-check.
pub fn delta_diag_gamma(profile: &SqrtProfile, t: f64) -> Result<f64> {
    let g = DiagDeparture::new(profile).gamma_t(t)?;
    let lambda1 = symmetric_eigenvalues(&g)[0];
    Ok((g.trace() - lambda1).max(0.0).sqrt())
}

/// `√(Σ_{j≥2} σ_j(M)²)` by a full SVD.
pub fn svd_tail(m: &DMatrix<f64>) -> f64 {
    sorted_singular_values(m).iter().skip(1).map(|s| s * s).sum::<f64>().sqrt()
}

/// One row of a departure profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepartureRecord {
    pub t: f64,
    pub delta_geo: f64,
    pub delta_diag: f64,
}

/// Both moduli on a grid of times.
pub fn departure_profile(profile: &SqrtProfile, ts: &[f64]) -> Result<Vec<DepartureRecord>> {
    let coeffs = DepartureCoefficients::from_profile(profile);
    let diag = DiagDeparture::new(profile);
    ts.iter()
        .map(|&t| {
            Ok(DepartureRecord {
                t,
                delta_geo: delta_geo_closed_form(&coeffs, t)?,
                delta_diag: diag.at(t)?,
            })
        })
        .collect()
}
