//! Departure moduli of fixed-chart geodesics between diagonal endpoints.

use kronbures::closure::{
    delta_geo_asymptote, delta_geo_closed_form, departure_profile, DepartureCoefficients, DiagDeparture, SqrtProfile,
};
use nalgebra::DVector;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::gen::{gen_log_diag, normal_vector, trial_rng};
use crate::report::{summarize, ExperimentOutput, TrialRecord};
use crate::Result;

pub const EXPERIMENT: &str = "departure";
/// Grid `j/200`, `j = 1..199`, for the maxima.
pub const GRID: usize = 200;
/// The quadratic fit uses `t_j = j/200` for `j = 1..FIT_POINTS`.
pub const FIT_POINTS: usize = 10;
/// Leaf regimes must give moduli at most this large.
pub const LEAF_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `c = a`: both endpoints share the `U` factor.
    SharedU,
    /// `d = b`: both endpoints share the `V` factor.
    SharedV,
    Generic,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::SharedU, Regime::SharedV, Regime::Generic];

    pub fn label(self) -> &'static str {
        match self {
            Regime::SharedU => "shared_u_leaf",
            Regime::SharedV => "shared_v_leaf",
            Regime::Generic => "generic",
        }
    }
}

/// Square-root profile of one draw. `u₀, u₁ = D₀(ξ)` and `v₀, v₁ = D₁(η)`
/// with log-coordinates of standard deviation `scale`; leaf regimes copy one
/// of the vectors instead of redrawing it.
pub fn draw_profile(n: usize, seed: u64, scale: f64, regime: Regime) -> Result<SqrtProfile> {
    let mut rng = trial_rng(seed);
    let mut next = |normalized: bool| -> DVector<f64> {
        let xi = normal_vector(n, &mut rng) * scale;
        gen_log_diag(&xi, normalized).map(f64::sqrt)
    };
    let a = next(true);
    let b = next(false);
    let c = next(true);
    let d = next(false);
    let (c, d) = match regime {
        Regime::SharedU => (a.clone(), d),
        Regime::SharedV => (c, b.clone()),
        Regime::Generic => (c, d),
    };
    Ok(SqrtProfile::new(a, b, c, d)?)
}

/// Summary of one draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DrawMetrics {
    pub max_delta_geo: f64,
    pub max_delta_diag: f64,
    pub fitted_coeff: f64,
    pub predicted_coeff: f64,
    pub fit_rel_err: f64,
}

pub fn draw_metrics(profile: &SqrtProfile) -> Result<DrawMetrics> {
    let coeffs = DepartureCoefficients::from_profile(profile);
    let diag = DiagDeparture::new(profile);
    let mut max_geo = 0.0f64;
    let mut max_diag = 0.0f64;
    let (mut num, mut den) = (0.0, 0.0);
    for j in 1..GRID {
        let t = j as f64 / GRID as f64;
        let g = delta_geo_closed_form(&coeffs, t)?;
        max_geo = max_geo.max(g);
        max_diag = max_diag.max(diag.at(t)?);
        if j <= FIT_POINTS {
            num += g * g * t * t;
            den += t.powi(4);
        }
    }
    let fitted = num / den;
    let predicted = delta_geo_asymptote(&coeffs);
    let fit_rel_err = if predicted == 0.0 {
        if fitted == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (fitted - predicted).abs() / predicted
    };
    Ok(DrawMetrics {
        max_delta_geo: max_geo,
        max_delta_diag: max_diag,
        fitted_coeff: fitted,
        predicted_coeff: predicted,
        fit_rel_err,
    })
}

/// Three regimes, `cfg.trials` draws each, at every size in `cfg.sizes`.
/// Draws run in parallel; draw `k` of every regime uses the stream
/// `seed + k`.
pub fn run_departure_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let mut out = ExperimentOutput::default();
    for &n in &cfg.sizes {
        for regime in Regime::ALL {
            let draws: Vec<DrawMetrics> = (0..cfg.trials)
                .into_par_iter()
                .map(|k| draw_metrics(&draw_profile(n, cfg.trial_seed(k), cfg.generic_scale, regime)?))
                .collect::<Result<_>>()?;
            let columns: [(&str, fn(&DrawMetrics) -> f64); 5] = [
                ("max_delta_geo", |m| m.max_delta_geo),
                ("max_delta_diag", |m| m.max_delta_diag),
                ("fitted_coeff", |m| m.fitted_coeff),
                ("predicted_coeff", |m| m.predicted_coeff),
                ("fit_rel_err", |m| m.fit_rel_err),
            ];
            for (metric, get) in columns {
                let values: Vec<f64> = draws.iter().map(get).collect();
                for (trial, &value) in values.iter().enumerate() {
                    out.records.push(TrialRecord {
                        experiment: EXPERIMENT.into(),
                        regime: regime.label().into(),
                        n,
                        trial,
                        metric: metric.into(),
                        value,
                        wall_time: 0.0,
                    });
                }
                out.rows.push(summarize(EXPERIMENT, regime.label(), n, metric, &values));
            }
            if regime != Regime::Generic {
                for (k, m) in draws.iter().enumerate() {
                    let worst = m.max_delta_geo.max(m.max_delta_diag);
                    if !(worst <= LEAF_TOL) {
                        out.violations
                            .push(format!("departure n={n} {} draw {k}: leaf modulus {worst:e}", regime.label()));
                    }
                }
            }
        }
        if out.profile.is_none() {
            let profile = draw_profile(n, cfg.trial_seed(0), cfg.generic_scale, Regime::Generic)?;
            let ts: Vec<f64> = (1..GRID).map(|j| j as f64 / GRID as f64).collect();
            out.profile = Some(departure_profile(&profile, &ts)?);
        }
    }
    Ok(out)
}
