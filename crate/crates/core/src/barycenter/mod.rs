//! Weighted Bures barycenters restricted to structured subsets of `𝒦ₙ`.
//!
//! No formula is offered for the barycenter over all of `𝒦ₙ`. Two restricted
//! problems are solved exactly: on a fixed commuting-coordinate slice the
//! minimizer comes from the Perron singular pair of a positive coefficient
//! matrix, and on a factor leaf the problem reduces to an `n × n` Bures
//! barycenter.

mod leaf;
mod oracle;
mod slice;

pub use leaf::{
    bw_barycenter, bw_barycenter_detailed, bw_stationarity, factor_objective, leaf_barycenter, BwSolution,
    LeafBarycenter, BW_MAX_ITER, FP_TOL,
};
pub use oracle::{log_coordinate_oracle, OracleSolution, LOG_BOUND, ORACLE_MAX_ITER};
pub use slice::{
    coefficient_matrix, perron_singular_pair, slice_barycenter, slice_objective, PerronSolution, SliceBarycenter,
    SliceData, PERRON_MAX_ITER, PERRON_TOL,
};

use crate::bures::bures_distance_sq;
use crate::error::{Error, Result};
use crate::kron::{pairwise_bures_sq_reduced, KroneckerPoint};
use crate::spd::SpdMatrix;

/// Weights must be positive and sum to one within this tolerance.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

pub(crate) fn check_weights(weights: &[f64], count: usize) -> Result<()> {
    if weights.len() != count {
        return Err(Error::DimensionMismatch {
            expected: count,
            got: weights.len(),
        });
    }
    if count == 0 {
        return Err(Error::InvalidData("no data".into()));
    }
    if let Some(index) = weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(Error::NonPositiveCoordinate {
            index,
            value: weights[index],
        });
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::InvalidData(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

/// `𝒥(K) = Σ wᵢ d_B²(K, Kᵢ)` on the full cone.
pub fn objective_j(k: &SpdMatrix, data: &[SpdMatrix], weights: &[f64]) -> Result<f64> {
    check_weights(weights, data.len())?;
    data.iter()
        .zip(weights)
        .map(|(ki, w)| Ok(w * bures_distance_sq(k, ki)?))
        .sum()
}

/// [`objective_j`] for Kronecker arguments, through the factor-size reduction.
pub fn objective_j_kron(k: &KroneckerPoint, data: &[KroneckerPoint], weights: &[f64]) -> Result<f64> {
    check_weights(weights, data.len())?;
    data.iter()
        .zip(weights)
        .map(|(ki, w)| Ok(w * pairwise_bures_sq_reduced(k, ki)?.0))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spd(n: usize, seed: u64) -> SpdMatrix {
        let mut s = seed.wrapping_add(17);
        let g = nalgebra::DMatrix::from_fn(n, n, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        });
        SpdMatrix::from_matrix(&g * g.transpose() + nalgebra::DMatrix::identity(n, n) * 0.1).unwrap()
    }

    fn point(n: usize, seed: u64) -> KroneckerPoint {
        KroneckerPoint::from_factors(&spd(n, seed), &spd(n, seed + 99)).unwrap()
    }

    #[test]
    fn objective_trivial_cases() {
        let a = spd(3, 1);
        assert!(objective_j(&a, &[a.clone()], &[1.0]).unwrap().abs() < 1e-12);
        let b = spd(3, 2);
        let j = objective_j(&a, &[a.clone(), b.clone()], &[0.5, 0.5]).unwrap();
        assert!((j - 0.5 * bures_distance_sq(&a, &b).unwrap()).abs() < 1e-12);
        assert!(objective_j(&a, &[a.clone()], &[0.5]).is_err());
        assert!(objective_j(&a, &[a.clone(), b], &[1.0]).is_err());
    }

    #[test]
    fn reduced_objective_matches_ambient() {
        let data: Vec<KroneckerPoint> = (0..4).map(|i| point(3, 10 + i)).collect();
        let w = [0.1, 0.2, 0.3, 0.4];
        let k = point(3, 50);
        let red = objective_j_kron(&k, &data, &w).unwrap();
        let amb_data: Vec<SpdMatrix> = data.iter().map(|p| p.embed().unwrap()).collect();
        let amb = objective_j(&k.embed().unwrap(), &amb_data, &w).unwrap();
        assert!((red - amb).abs() <= 1e-11 * amb);
    }
}
