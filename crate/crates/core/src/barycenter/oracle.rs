//! Independent numerical solver for the slice problem, used to cross-check
//! the Perron formula.
//!
//! Variables are `s = log x` and `r = log y` with `Σ s = 0` and every
//! coordinate in `[−8, 8]`. The method is projected gradient descent with
//! Barzilai–Borwein steps and a nonmonotone Armijo backtracking rule.

use nalgebra::{DMatrix, DVector};

use super::slice::{coefficient_matrix, SliceData};
use crate::error::{Error, Result};

/// Bound on every logarithmic coordinate.
pub const LOG_BOUND: f64 = 8.0;
pub const ORACLE_MAX_ITER: usize = 20_000;

/// Residual target relative to `(Σx)(Σy)`, the scale of the gradient terms.
const RESIDUAL_TOL: f64 = 1e-12;
/// Accepted residual when the line search stalls at round-off.
const STALL_TOL: f64 = 1e-8;
const ARMIJO: f64 = 1e-4;
const MEMORY: usize = 10;

#[derive(Clone, Debug)]
pub struct OracleSolution {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub objective: f64,
    /// `‖z − Proj(z − ∇f(z))‖₂` in log coordinates.
    pub residual: f64,
    pub iterations: usize,
}

struct Problem {
    c: DMatrix<f64>,
    kappa: f64,
    n: usize,
}

impl Problem {
    fn objective(&self, z: &DVector<f64>) -> f64 {
        let (s, r) = (z.rows(0, self.n), z.rows(self.n, self.n));
        let hs = s.map(|v| (0.5 * v).exp());
        let hr = r.map(|v| (0.5 * v).exp());
        let sx = hs.map(|h| h * h).sum();
        let sy = hr.map(|h| h * h).sum();
        sx * sy + self.kappa - 2.0 * hs.dot(&(&self.c * hr))
    }

    fn gradient(&self, z: &DVector<f64>) -> (DVector<f64>, f64) {
        let n = self.n;
        let hs = z.rows(0, n).map(|v| (0.5 * v).exp());
        let hr = z.rows(n, n).map(|v| (0.5 * v).exp());
        let x = hs.map(|h| h * h);
        let y = hr.map(|h| h * h);
        let (sx, sy) = (x.sum(), y.sum());
        let chr = &self.c * &hr;
        let cths = self.c.transpose() * &hs;
        let mut g = DVector::zeros(2 * n);
        for p in 0..n {
            g[p] = x[p] * sy - hs[p] * chr[p];
            g[n + p] = y[p] * sx - hr[p] * cths[p];
        }
        (g, sx * sy)
    }
}

/// Euclidean projection onto `{Σ s = 0} ∩ [−B, B]ⁿ`: `s = clamp(z − λ)` with
/// `λ` found by bisection on the monotone map `λ ↦ Σ clamp(z − λ)`.
fn project_centered(z: &mut [f64]) {
    let n = z.len() as f64;
    let mean = z.iter().sum::<f64>() / n;
    if z.iter().all(|v| (v - mean).abs() <= LOG_BOUND) {
        z.iter_mut().for_each(|v| *v -= mean);
        return;
    }
    let sum_at = |lambda: f64, z: &[f64]| z.iter().map(|v| (v - lambda).clamp(-LOG_BOUND, LOG_BOUND)).sum::<f64>();
    let (mut lo, mut hi) = (
        z.iter().copied().fold(f64::INFINITY, f64::min) - LOG_BOUND,
        z.iter().copied().fold(f64::NEG_INFINITY, f64::max) + LOG_BOUND,
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sum_at(mid, z) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    z.iter_mut().for_each(|v| *v = (*v - lambda).clamp(-LOG_BOUND, LOG_BOUND));
}

fn project(z: &mut DVector<f64>, n: usize) {
    project_centered(&mut z.as_mut_slice()[..n]);
    for v in z.as_mut_slice()[n..].iter_mut() {
        *v = v.clamp(-LOG_BOUND, LOG_BOUND);
    }
}

fn projected_residual(z: &DVector<f64>, g: &DVector<f64>, n: usize) -> f64 {
    let mut w = z - g;
    project(&mut w, n);
    (z - w).norm()
}

/// Minimizes the slice objective in logarithmic coordinates.
pub fn log_coordinate_oracle(data: &SliceData, max_iter: usize) -> Result<OracleSolution> {
    let n = data.n();
    let problem = Problem {
        c: coefficient_matrix(data),
        kappa: data.kappa(),
        n,
    };
    // Start from the logs of the weighted arithmetic means of the data.
    let w = data.weights();
    let mean_u = data.u_eigs().transpose() * w;
    let mean_v = data.v_eigs().transpose() * w;
    let mut z = DVector::from_iterator(2 * n, mean_u.iter().chain(mean_v.iter()).map(|v| v.ln()));
    project(&mut z, n);

    let mut f = problem.objective(&z);
    let (mut g, mut scale) = problem.gradient(&z);
    let mut history = vec![f];
    let mut step = 1.0 / g.amax().max(1.0);
    let mut residual = projected_residual(&z, &g, n);
    for iteration in 0..max_iter {
        if residual <= RESIDUAL_TOL * scale {
            return Ok(finish(&z, n, f, residual, iteration));
        }
        let f_ref = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut alpha = step;
        let accepted = loop {
            let mut trial = &z - &g * alpha;
            project(&mut trial, n);
            let d = &trial - &z;
            let ft = problem.objective(&trial);
            if ft <= f_ref + ARMIJO * g.dot(&d) {
                break Some((trial, ft));
            }
            alpha *= 0.5;
            if alpha < 1e-20 || d.amax() == 0.0 {
                break None;
            }
        };
        let Some((z_new, f_new)) = accepted else {
            if residual <= STALL_TOL * scale {
                return Ok(finish(&z, n, f, residual, iteration));
            }
            return Err(Error::NoConvergence {
                solver: "log-coordinate oracle",
                iterations: iteration,
                residual,
                gap: None,
            });
        };
        let (g_new, scale_new) = problem.gradient(&z_new);
        let sk = &z_new - &z;
        let yk = &g_new - &g;
        let sy = sk.dot(&yk);
        step = if sy > 0.0 { (sk.norm_squared() / sy).clamp(1e-12, 1e12) } else { alpha * 2.0 };
        z = z_new;
        f = f_new;
        g = g_new;
        scale = scale_new;
        residual = projected_residual(&z, &g, n);
        history.push(f);
        if history.len() > MEMORY {
            history.remove(0);
        }
    }
    Err(Error::NoConvergence {
        solver: "log-coordinate oracle",
        iterations: max_iter,
        residual,
        gap: None,
    })
}

fn finish(z: &DVector<f64>, n: usize, objective: f64, residual: f64, iterations: usize) -> OracleSolution {
    OracleSolution {
        x: z.rows(0, n).map(f64::exp),
        y: z.rows(n, n).map(f64::exp),
        objective,
        residual,
        iterations,
    }
}
