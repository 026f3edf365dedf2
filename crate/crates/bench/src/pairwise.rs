//! Ambient versus reduced pairwise Bures distances on random Kronecker pairs.

use std::time::Instant;

use kronbures::bures::bures_distance_sq;
use kronbures::kron::pairwise_bures_sq_reduced;
use kronbures::KroneckerPoint;

use crate::config::ExperimentConfig;
use crate::gen::{gen_spd, trial_rng};
use crate::report::{summarize, ExperimentOutput, SummaryRow, TrialRecord};
use crate::Result;

pub const EXPERIMENT: &str = "pairwise";
pub const REGIME: &str = "random";
/// Relative disagreement above which a trial counts as inconsistent.
pub const CONSISTENCY_TOL: f64 = 1e-10;

struct Trial {
    ambient: Option<(f64, f64)>,
    reduced: (f64, f64),
}

fn draw(n: usize, seed: u64) -> [kronbures::SpdMatrix; 4] {
    let mut rng = trial_rng(seed);
    [(); 4].map(|_| gen_spd(n, &mut rng))
}

fn run_trial(n: usize, seed: u64, ambient: bool) -> Result<Trial> {
    let [u0, v0, u1, v1] = draw(n, seed);

    let start = Instant::now();
    let p0 = KroneckerPoint::from_factors(&u0, &v0)?;
    let p1 = KroneckerPoint::from_factors(&u1, &v1)?;
    let (reduced, _) = pairwise_bures_sq_reduced(&p0, &p1)?;
    let reduced_time = start.elapsed().as_secs_f64();

    let ambient = if ambient {
        let start = Instant::now();
        let k0 = p0.embed()?;
        let k1 = p1.embed()?;
        let d = bures_distance_sq(&k0, &k1)?;
        Some((d, start.elapsed().as_secs_f64()))
    } else {
        None
    };
    Ok(Trial {
        ambient,
        reduced: (reduced, reduced_time),
    })
}

/// Per size: timings of both evaluations, their ratio, the relative error,
/// and the theoretical storage ratio `n²/2`. Trials run sequentially so the
/// timings do not contend with each other.
pub fn run_pairwise_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let mut out = ExperimentOutput::default();
    for &n in &cfg.sizes {
        let ambient = n <= cfg.ambient_cutoff;
        // Untimed warm-up.
        run_trial(n, cfg.trial_seed(0), ambient)?;
        let mut record = |trial: usize, metric: &str, value: f64, wall_time: f64| {
            out.records.push(TrialRecord {
                experiment: EXPERIMENT.into(),
                regime: REGIME.into(),
                n,
                trial,
                metric: metric.into(),
                value,
                wall_time,
            })
        };
        let mut reduced_times = Vec::new();
        let mut ambient_times = Vec::new();
        let mut rel_errors = Vec::new();
        let mut violations = Vec::new();
        for trial in 0..cfg.trials {
            let t = run_trial(n, cfg.trial_seed(trial), ambient)?;
            let (red, red_time) = t.reduced;
            record(trial, "reduced", red, red_time);
            reduced_times.push(red_time);
            if let Some((amb, amb_time)) = t.ambient {
                let rel = (amb - red).abs() / amb.abs();
                record(trial, "ambient", amb, amb_time);
                record(trial, "rel_error", rel, 0.0);
                record(trial, "speedup", amb_time / red_time, 0.0);
                ambient_times.push(amb_time);
                rel_errors.push(rel);
                if !(rel <= CONSISTENCY_TOL) {
                    violations.push(format!("pairwise n={n} trial {trial}: relative error {rel:e}"));
                }
            }
        }
        out.violations.extend(violations);
        out.rows.extend(size_rows(n, &ambient_times, &reduced_times, &rel_errors));
    }
    Ok(out)
}

fn size_rows(n: usize, ambient: &[f64], reduced: &[f64], rel_errors: &[f64]) -> Vec<SummaryRow> {
    let row = |metric: &str, values: &[f64]| summarize(EXPERIMENT, REGIME, n, metric, values);
    let mut rows = Vec::new();
    if !ambient.is_empty() {
        rows.push(row("ambient_time", ambient));
    }
    rows.push(row("reduced_time", reduced));
    if !ambient.is_empty() {
        // Ratio of mean times, as in the usual timing tables.
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let mut speedup = row("speedup", &[]);
        speedup.mean = mean(ambient) / mean(reduced);
        speedup.std = 0.0;
        rows.push(speedup);
        rows.push(row("rel_error", rel_errors));
    }
    rows.push(row("storage_ratio", &[storage_ratio(n)]));
    rows
}

/// Entries of the `n² × n²` ambient matrix over the `2n²` factor entries.
pub fn storage_ratio(n: usize) -> f64 {
    (n * n) as f64 / 2.0
}
