//! Bures barycenters of factor matrices, and barycenters on factor leaves.

use nalgebra::DMatrix;

use super::check_weights;
use crate::bures::bures_distance_sq;
use crate::error::{Error, Result};
use crate::kron::{leaf_membership, FactorLeaf, KroneckerPoint, LeafKind};
use crate::spd::{gauge_normalize, psd_sqrt, SpdMatrix, SymmetricMatrix};

pub const FP_TOL: f64 = 1e-10;
pub const BW_MAX_ITER: usize = 1000;

/// Result of the fixed-point iteration together with its stationarity trace.
#[derive(Clone, Debug)]
pub struct BwSolution {
    pub matrix: SpdMatrix,
    pub iterations: usize,
    /// `‖Σ wᵢ T_{V→Vᵢ} − I‖_F` at each visited iterate.
    pub residuals: Vec<f64>,
}

/// `S = Σ wᵢ (V^{1/2} Vᵢ V^{1/2})^{1/2}` and the stationarity residual
/// `‖V^{-1/2} S V^{-1/2} − I‖_F`.
fn fixed_point_parts(v: &SpdMatrix, mats: &[SpdMatrix], weights: &[f64]) -> (DMatrix<f64>, f64) {
    let n = v.dim();
    let s_half = v.sqrt();
    let r_half = v.inv_sqrt();
    let mut s = DMatrix::zeros(n, n);
    for (m, w) in mats.iter().zip(weights) {
        s += psd_sqrt(&(s_half.as_matrix() * m.as_matrix() * s_half.as_matrix())) * *w;
    }
    let t = r_half.as_matrix() * &s * r_half.as_matrix();
    let residual = (t - DMatrix::identity(n, n)).norm();
    (s, residual)
}

fn check_mats(mats: &[SpdMatrix], weights: &[f64]) -> Result<()> {
    check_weights(weights, mats.len())?;
    let n = mats[0].dim();
    for m in mats {
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.dim(),
            });
        }
    }
    Ok(())
}

/// `‖Σ wᵢ T_{V→Vᵢ} − I‖_F`.
pub fn bw_stationarity(v: &SpdMatrix, mats: &[SpdMatrix], weights: &[f64]) -> Result<f64> {
    check_mats(mats, weights)?;
    Ok(fixed_point_parts(v, mats, weights).1)
}

/// `Σ wᵢ d_B²(V, Vᵢ)`.
pub fn factor_objective(v: &SpdMatrix, mats: &[SpdMatrix], weights: &[f64]) -> Result<f64> {
    check_mats(mats, weights)?;
    mats.iter().zip(weights).map(|(m, w)| Ok(w * bures_distance_sq(v, m)?)).sum()
}

/// Fixed-point iteration `V ← V^{-1/2} S² V^{-1/2}` started at the weighted
/// arithmetic mean.
pub fn bw_barycenter_detailed(mats: &[SpdMatrix], weights: &[f64], max_iter: usize, fp_tol: f64) -> Result<BwSolution> {
    check_mats(mats, weights)?;
    let n = mats[0].dim();
    let mut mean = DMatrix::zeros(n, n);
    for (m, w) in mats.iter().zip(weights) {
        mean += m.as_matrix() * *w;
    }
    let mut v = SpdMatrix::from_matrix(mean)?;
    let mut residuals = Vec::new();
    let mut best: Option<(f64, SpdMatrix)> = None;
    for iteration in 0..=max_iter {
        let (s, residual) = fixed_point_parts(&v, mats, weights);
        residuals.push(residual);
        if residual <= fp_tol {
            return Ok(BwSolution {
                matrix: v,
                iterations: iteration,
                residuals,
            });
        }
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, v.clone()));
        }
        if iteration == max_iter {
            break;
        }
        let r_half = v.inv_sqrt();
        let next = r_half.as_matrix() * &s * &s * r_half.as_matrix();
        v = SpdMatrix::new(SymmetricMatrix::new(next)?)?;
    }
    let (residual, best) = best.expect("at least one iterate");
    Err(Error::BarycenterNoConvergence {
        iterations: max_iter,
        residual,
        best: Box::new(best),
    })
}

pub fn bw_barycenter(mats: &[SpdMatrix], weights: &[f64], max_iter: usize, fp_tol: f64) -> Result<SpdMatrix> {
    bw_barycenter_detailed(mats, weights, max_iter, fp_tol).map(|s| s.matrix)
}

#[derive(Clone, Debug)]
pub struct LeafBarycenter {
    pub leaf: FactorLeaf,
    pub point: KroneckerPoint,
    /// `V̄` on row leaves, `M̄ = ᾱ Ū` on column leaves.
    pub factor_solution: SpdMatrix,
}

/// Leafwise barycenter: the factor Bures barycenter of `Vᵢ` (row leaves) or
/// of `αᵢUᵢ` (column leaves).
pub fn leaf_barycenter(leaf: &FactorLeaf, points: &[KroneckerPoint], weights: &[f64]) -> Result<LeafBarycenter> {
    check_weights(weights, points.len())?;
    if points.iter().any(|p| !leaf_membership(leaf, p)) {
        return Err(Error::NotOnLeaf {
            leaf: leaf.kind().name(),
        });
    }
    let factors: Vec<SpdMatrix> = match leaf.kind() {
        LeafKind::Row => points.iter().map(|p| p.v().clone()).collect(),
        LeafKind::Col => points
            .iter()
            .map(|p| p.u().scale(leaf.col_scale(p.v())))
            .collect::<Result<_>>()?,
    };
    let factor_solution = bw_barycenter(&factors, weights, BW_MAX_ITER, FP_TOL)?;
    let point = match leaf.kind() {
        LeafKind::Row => KroneckerPoint::new(leaf.anchor().clone(), factor_solution.clone())?,
        LeafKind::Col => {
            let (u, v) = gauge_normalize(&factor_solution, leaf.anchor())?;
            KroneckerPoint::new(u, v)?
        }
    };
    Ok(LeafBarycenter {
        leaf: leaf.clone(),
        point,
        factor_solution,
    })
}
