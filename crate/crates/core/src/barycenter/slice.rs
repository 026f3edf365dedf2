//! Exact barycenter on a fixed commuting-coordinate slice.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::check_weights;
use crate::error::{Error, Result};
use crate::kron::{KroneckerPoint, GAUGE_TOL};
use crate::spd::{matrix_from_rows, matrix_to_rows, SpdMatrix};

pub const PERRON_TOL: f64 = 1e-14;
pub const PERRON_MAX_ITER: usize = 10_000;

const ORTHO_TOL: f64 = 1e-10;

/// Data sharing joint eigenbases: `Uᵢ = Q diag(u_eigs[i]) Qᵀ`,
/// `Vᵢ = R diag(v_eigs[i]) Rᵀ`. Rows of `u_eigs`/`v_eigs` index the data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SliceDataJson", into = "SliceDataJson")]
pub struct SliceData {
    q_basis: DMatrix<f64>,
    r_basis: DMatrix<f64>,
    u_eigs: DMatrix<f64>,
    v_eigs: DMatrix<f64>,
    weights: DVector<f64>,
    kappa: f64,
}

fn check_basis(m: &DMatrix<f64>, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.nrows(),
        });
    }
    let defect = (m.transpose() * m - DMatrix::identity(n, n)).norm();
    if defect > ORTHO_TOL * (n as f64).sqrt() {
        return Err(Error::InvalidData(format!("basis is not orthogonal (defect {defect:e})")));
    }
    Ok(())
}

fn check_positive_entries(m: &DMatrix<f64>) -> Result<()> {
    match m.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
        Some(index) => Err(Error::NonPositiveCoordinate { index, value: m[index] }),
        None => Ok(()),
    }
}

impl SliceData {
    pub fn new(
        q_basis: DMatrix<f64>,
        r_basis: DMatrix<f64>,
        u_eigs: DMatrix<f64>,
        v_eigs: DMatrix<f64>,
        weights: DVector<f64>,
    ) -> Result<Self> {
        let (count, n) = u_eigs.shape();
        if v_eigs.shape() != (count, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v_eigs.ncols(),
            });
        }
        check_weights(weights.as_slice(), count)?;
        check_basis(&q_basis, n)?;
        check_basis(&r_basis, n)?;
        check_positive_entries(&u_eigs)?;
        check_positive_entries(&v_eigs)?;
        for row in u_eigs.row_iter() {
            let log_det: f64 = row.iter().map(|x| x.ln()).sum();
            if log_det.abs() > GAUGE_TOL * n as f64 {
                return Err(Error::GaugeViolation { log_det });
            }
        }
        let kappa = (0..count).map(|i| weights[i] * u_eigs.row(i).sum() * v_eigs.row(i).sum()).sum();
        Ok(Self {
            q_basis,
            r_basis,
            u_eigs,
            v_eigs,
            weights,
            kappa,
        })
    }

    /// Slice in the standard bases.
    pub fn diagonal(u_eigs: DMatrix<f64>, v_eigs: DMatrix<f64>, weights: DVector<f64>) -> Result<Self> {
        let n = u_eigs.ncols();
        Self::new(DMatrix::identity(n, n), DMatrix::identity(n, n), u_eigs, v_eigs, weights)
    }

    pub fn n(&self) -> usize {
        self.u_eigs.ncols()
    }

    pub fn len(&self) -> usize {
        self.u_eigs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn q_basis(&self) -> &DMatrix<f64> {
        &self.q_basis
    }

    pub fn r_basis(&self) -> &DMatrix<f64> {
        &self.r_basis
    }

    pub fn u_eigs(&self) -> &DMatrix<f64> {
        &self.u_eigs
    }

    pub fn v_eigs(&self) -> &DMatrix<f64> {
        &self.v_eigs
    }

    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    /// `κ = Σ wᵢ tr(Uᵢ) tr(Vᵢ)`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// The point with slice coordinates `(x, y)`.
    pub fn point(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<KroneckerPoint> {
        let u = SpdMatrix::from_eigen(x.clone(), self.q_basis.clone())?;
        let v = SpdMatrix::from_eigen(y.clone(), self.r_basis.clone())?;
        KroneckerPoint::from_factors(&u, &v)
    }

    /// The data as Kronecker points.
    pub fn points(&self) -> Result<Vec<KroneckerPoint>> {
        (0..self.len())
            .map(|i| self.point(&self.u_eigs.row(i).transpose(), &self.v_eigs.row(i).transpose()))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("slice data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Serialize, Deserialize)]
struct SliceDataJson {
    n: usize,
    #[serde(rename = "N")]
    count: usize,
    weights: Vec<f64>,
    u_eigs: Vec<Vec<f64>>,
    v_eigs: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q_basis: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r_basis: Option<Vec<Vec<f64>>>,
}

impl TryFrom<SliceDataJson> for SliceData {
    type Error = Error;

    fn try_from(j: SliceDataJson) -> Result<Self> {
        let n = j.n;
        for rows in [&j.u_eigs, &j.v_eigs] {
            if rows.len() != j.count {
                return Err(Error::DimensionMismatch {
                    expected: j.count,
                    got: rows.len(),
                });
            }
        }
        let basis = |b: Option<Vec<Vec<f64>>>| match b {
            Some(rows) => matrix_from_rows(&rows, n),
            None => Ok(DMatrix::identity(n, n)),
        };
        Self::new(
            basis(j.q_basis)?,
            basis(j.r_basis)?,
            matrix_from_rows(&j.u_eigs, n)?,
            matrix_from_rows(&j.v_eigs, n)?,
            DVector::from_vec(j.weights),
        )
    }
}

impl From<SliceData> for SliceDataJson {
    fn from(d: SliceData) -> Self {
        let n = d.n();
        let identity = DMatrix::identity(n, n);
        let basis = |b: &DMatrix<f64>| (b != &identity).then(|| matrix_to_rows(b));
        Self {
            n,
            count: d.len(),
            weights: d.weights.iter().copied().collect(),
            u_eigs: matrix_to_rows(&d.u_eigs),
            v_eigs: matrix_to_rows(&d.v_eigs),
            q_basis: basis(&d.q_basis),
            r_basis: basis(&d.r_basis),
        }
    }
}

/// `c_pq = Σᵢ wᵢ √(u_{i,p} v_{i,q})`.
pub fn coefficient_matrix(data: &SliceData) -> DMatrix<f64> {
    let n = data.n();
    let mut c = DMatrix::zeros(n, n);
    for i in 0..data.len() {
        let su = data.u_eigs.row(i).map(f64::sqrt).transpose();
        let sv = data.v_eigs.row(i).map(f64::sqrt);
        c += su * sv * data.weights[i];
    }
    c
}

fn check_coordinates(x: &DVector<f64>, n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    match x.iter().position(|&v| !(v > 0.0)) {
        Some(index) => Err(Error::NonPositiveCoordinate { index, value: x[index] }),
        None => Ok(()),
    }
}

/// `(Σx)(Σy) + κ − 2 Σ c_pq √(x_p y_q)`.
pub fn slice_objective(x: &DVector<f64>, y: &DVector<f64>, data: &SliceData) -> Result<f64> {
    check_coordinates(x, data.n())?;
    check_coordinates(y, data.n())?;
    let c = coefficient_matrix(data);
    let cross = x.map(f64::sqrt).dot(&(c * y.map(f64::sqrt)));
    Ok(x.sum() * y.sum() + data.kappa - 2.0 * cross)
}

/// Top singular triple of an entrywise-positive matrix, with
/// `α = (Π u₁)^{-1/n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerronSolution {
    pub sigma1: f64,
    pub u1: DVector<f64>,
    pub v1: DVector<f64>,
    pub alpha: f64,
}

/// Power iteration on `CCᵀ` from the all-ones vector, stopped when successive
/// iterates differ by at most `tol` in the max norm.
pub fn perron_singular_pair(c: &DMatrix<f64>, max_iter: usize, tol: f64) -> Result<PerronSolution> {
    let n = c.nrows();
    if n == 0 {
        return Err(Error::InvalidData("empty coefficient matrix".into()));
    }
    if let Some(index) = c.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::NonPositiveCoordinate { index, value: c[index] });
    }
    let ct = c.transpose();
    let mut u = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut diffs = (f64::NAN, f64::NAN);
    for _ in 0..max_iter {
        let mut next = c * (&ct * &u);
        next /= next.norm();
        let diff = (&next - &u).amax();
        u = next;
        diffs = (diffs.1, diff);
        if diff <= tol {
            let w = &ct * &u;
            let sigma1 = w.norm();
            let v = w / sigma1;
            let alpha = (-u.iter().map(|x| x.ln()).sum::<f64>() / n as f64).exp();
            return Ok(PerronSolution {
                sigma1,
                u1: u,
                v1: v,
                alpha,
            });
        }
    }
    // Successive differences shrink by (σ₂/σ₁)²; report the implied gap.
    let ratio = diffs.1 / diffs.0;
    Err(Error::NoConvergence {
        solver: "perron power iteration",
        iterations: max_iter,
        residual: diffs.1,
        gap: ratio.is_finite().then(|| 1.0 - ratio.clamp(0.0, 1.0).sqrt()),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceBarycenter {
    pub x_star: DVector<f64>,
    pub y_star: DVector<f64>,
    pub min_value: f64,
    pub perron: PerronSolution,
}

/// `x★ = α² u₁∘u₁`, `y★ = (σ₁²/α²) v₁∘v₁`, minimum `κ − σ₁²`.
pub fn slice_barycenter(data: &SliceData) -> Result<SliceBarycenter> {
    let c = coefficient_matrix(data);
    let perron = perron_singular_pair(&c, PERRON_MAX_ITER, PERRON_TOL)?;
    let a2 = perron.alpha * perron.alpha;
    let x_star = perron.u1.map(|u| a2 * u * u);
    let s2 = perron.sigma1 * perron.sigma1;
    let y_star = perron.v1.map(|v| s2 / a2 * v * v);
    Ok(SliceBarycenter {
        x_star,
        y_star,
        min_value: data.kappa - s2,
        perron,
    })
}
