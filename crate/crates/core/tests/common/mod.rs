#![allow(dead_code)]

use kronbures::{KroneckerPoint, SpdMatrix};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| r.sample(StandardNormal))
}

pub fn symmetric(r: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let g = normal_matrix(r, n, n);
    (&g + g.transpose()) * 0.5
}

/// `GGᵀ/n + shift·I`.
pub fn spd(r: &mut ChaCha8Rng, n: usize, shift: f64) -> SpdMatrix {
    let g = normal_matrix(r, n, n);
    SpdMatrix::from_matrix(&g * g.transpose() / n as f64 + DMatrix::identity(n, n) * shift).unwrap()
}

pub fn orthogonal(r: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    normal_matrix(r, n, n).qr().q()
}

/// Rotated lognormal spectrum with log-scale `scale`.
pub fn lognormal_spd(r: &mut ChaCha8Rng, n: usize, scale: f64) -> SpdMatrix {
    let vals = DVector::from_fn(n, |_, _| (scale * r.sample::<f64, _>(StandardNormal)).exp());
    SpdMatrix::from_eigen(vals, orthogonal(r, n)).unwrap()
}

pub fn point(r: &mut ChaCha8Rng, n: usize) -> KroneckerPoint {
    KroneckerPoint::from_factors(&spd(r, n, 0.1), &spd(r, n, 0.1)).unwrap()
}

pub fn rel(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm()
}
