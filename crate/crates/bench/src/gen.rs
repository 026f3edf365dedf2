use kronbures::SpdMatrix;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Stream for one trial.
pub fn trial_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_vector<R: Rng>(n: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// `GGᵀ + 0.01 I` with standard-normal `G`.
pub fn gen_spd<R: Rng>(n: usize, rng: &mut R) -> SpdMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    SpdMatrix::from_matrix(&g * g.transpose() + DMatrix::identity(n, n) * 0.01).expect("shifted Gram matrix is SPD")
}

/// `D₀(ξ) = exp(ξ − ξ̄)` when `normalized`, else `D₁(ξ) = exp(ξ)`.
pub fn gen_log_diag(xi: &DVector<f64>, normalized: bool) -> DVector<f64> {
    let shift = if normalized && !xi.is_empty() { xi.mean() } else { 0.0 };
    xi.map(|x| (x - shift).exp())
}
