//! Slice barycenters: the Perron formula against an independent solver.

use kronbures::barycenter::{log_coordinate_oracle, slice_barycenter, SliceData, ORACLE_MAX_ITER};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::gen::{gen_log_diag, normal_vector, trial_rng};
use crate::report::{summarize, ExperimentOutput, TrialRecord};
use crate::Result;

pub const EXPERIMENT: &str = "barycenter";
/// Formula and oracle objectives must agree to this relative tolerance.
pub const OBJECTIVE_TOL: f64 = 1e-9;
pub const COORD_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dataset {
    /// `Uᵢ = I`, `Vᵢ = αᵢ I`.
    A,
    /// `Uᵢ = D₀(0.1 ξᵢ)`, `Vᵢ = αᵢ D₁(0.1 ηᵢ)`.
    B,
    /// As `B` with unit perturbation size.
    C,
}

impl Dataset {
    pub const ALL: [Dataset; 3] = [Dataset::A, Dataset::B, Dataset::C];

    pub fn label(self) -> &'static str {
        match self {
            Dataset::A => "A",
            Dataset::B => "B",
            Dataset::C => "C",
        }
    }
}

/// Draws `ζ ∈ ℝᴺ`, then `ξᵢ, ηᵢ ∈ ℝⁿ` for each datum, with `αᵢ = e^{ζᵢ}`.
/// All three datasets are built from the same draw.
pub fn draw_dataset(n: usize, count: usize, seed: u64, dataset: Dataset) -> Result<SliceData> {
    let mut rng = trial_rng(seed);
    let zeta = normal_vector(count, &mut rng);
    let mut u = DMatrix::zeros(count, n);
    let mut v = DMatrix::zeros(count, n);
    for i in 0..count {
        let xi = normal_vector(n, &mut rng);
        let eta = normal_vector(n, &mut rng);
        let alpha = zeta[i].exp();
        let (du, dv) = match dataset {
            Dataset::A => (DVector::from_element(n, 1.0), DVector::from_element(n, 1.0)),
            Dataset::B => (gen_log_diag(&(xi * 0.1), true), gen_log_diag(&(eta * 0.1), false)),
            Dataset::C => (gen_log_diag(&xi, true), gen_log_diag(&eta, false)),
        };
        u.set_row(i, &du.transpose());
        v.set_row(i, &(dv * alpha).transpose());
    }
    let w = DVector::from_element(count, 1.0 / count as f64);
    Ok(SliceData::diagonal(u, v, w)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstanceMetrics {
    pub formula_obj: f64,
    pub oracle_obj: f64,
    pub objective_gap: f64,
    pub residual: f64,
    pub coord_error: f64,
}

fn rel(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

/// Formula minimizer versus the log-coordinate solver. A solver that fails to
/// converge is reported as infinite residual and error.
pub fn instance_metrics(data: &SliceData) -> Result<InstanceMetrics> {
    let exact = slice_barycenter(data)?;
    let m = match log_coordinate_oracle(data, ORACLE_MAX_ITER) {
        Ok(sol) => InstanceMetrics {
            formula_obj: exact.min_value,
            oracle_obj: sol.objective,
            objective_gap: (sol.objective - exact.min_value).abs() / exact.min_value.abs().max(f64::MIN_POSITIVE),
            residual: sol.residual,
            coord_error: rel(&sol.x, &exact.x_star).max(rel(&sol.y, &exact.y_star)),
        },
        Err(_) => InstanceMetrics {
            formula_obj: exact.min_value,
            oracle_obj: f64::NAN,
            objective_gap: f64::INFINITY,
            residual: f64::INFINITY,
            coord_error: f64::INFINITY,
        },
    };
    Ok(m)
}

pub fn run_barycenter_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let mut out = ExperimentOutput::default();
    for &n in &cfg.sizes {
        for dataset in Dataset::ALL {
            let metrics: Vec<InstanceMetrics> = (0..cfg.trials)
                .into_par_iter()
                .map(|k| instance_metrics(&draw_dataset(n, cfg.count, cfg.trial_seed(k), dataset)?))
                .collect::<Result<_>>()?;
            let columns: [(&str, fn(&InstanceMetrics) -> f64); 5] = [
                ("formula_obj", |m| m.formula_obj),
                ("oracle_obj", |m| m.oracle_obj),
                ("objective_gap", |m| m.objective_gap),
                ("residual", |m| m.residual),
                ("coord_error", |m| m.coord_error),
            ];
            for (metric, get) in columns {
                let values: Vec<f64> = metrics.iter().map(get).collect();
                for (trial, &value) in values.iter().enumerate() {
                    out.records.push(TrialRecord {
                        experiment: EXPERIMENT.into(),
                        regime: dataset.label().into(),
                        n,
                        trial,
                        metric: metric.into(),
                        value,
                        wall_time: 0.0,
                    });
                }
                out.rows.push(summarize(EXPERIMENT, dataset.label(), n, metric, &values));
            }
            for (k, m) in metrics.iter().enumerate() {
                if !(m.objective_gap <= OBJECTIVE_TOL && m.coord_error <= COORD_TOL) {
                    out.violations.push(format!(
                        "barycenter n={n} dataset {} trial {k}: objective gap {:e}, coordinate error {:e}",
                        dataset.label(),
                        m.objective_gap,
                        m.coord_error
                    ));
                }
            }
        }
    }
    Ok(out)
}
