use std::fmt::Write as _;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use kronbures::closure::DepartureRecord;
use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::{BenchError, Result};

/// One line of a results table: a metric summarized over trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub experiment: String,
    pub regime: String,
    pub n: usize,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
}

/// One metric value from one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub experiment: String,
    pub regime: String,
    pub n: usize,
    pub trial: usize,
    pub metric: String,
    pub value: f64,
    /// Seconds spent on the evaluation that produced `value`; 0 for untimed metrics.
    pub wall_time: f64,
}

/// Everything an experiment run produces.
#[derive(Clone, Debug, Default)]
pub struct ExperimentOutput {
    pub rows: Vec<SummaryRow>,
    pub records: Vec<TrialRecord>,
    /// Numerical-consistency failures; a nonempty list maps to exit code 3.
    pub violations: Vec<String>,
    /// Per-t departure moduli of one generic draw, for plotting.
    pub profile: Option<Vec<DepartureRecord>>,
}

impl ExperimentOutput {
    pub fn extend(&mut self, other: ExperimentOutput) {
        self.rows.extend(other.rows);
        self.records.extend(other.records);
        self.violations.extend(other.violations);
        if self.profile.is_none() {
            self.profile = other.profile;
        }
    }

    /// Values of one metric across trials, in trial order.
    pub fn values(&self, regime: &str, n: usize, metric: &str) -> Vec<f64> {
        let mut recs: Vec<&TrialRecord> = self
            .records
            .iter()
            .filter(|r| r.regime == regime && r.n == n && r.metric == metric)
            .collect();
        recs.sort_by_key(|r| r.trial);
        recs.into_iter().map(|r| r.value).collect()
    }

    pub fn row(&self, regime: &str, n: usize, metric: &str) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.regime == regime && r.n == n && r.metric == metric)
    }
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / k;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, var.sqrt())
}

pub fn summarize(experiment: &str, regime: &str, n: usize, metric: &str, values: &[f64]) -> SummaryRow {
    let (mean, std) = mean_std(values);
    SummaryRow {
        experiment: experiment.into(),
        regime: regime.into(),
        n,
        metric: metric.into(),
        mean,
        std,
    }
}

pub fn write_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn render_table(rows: &[SummaryRow]) -> String {
    let header = ["experiment", "regime", "n", "metric", "mean", "std"];
    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [
                r.experiment.clone(),
                r.regime.clone(),
                r.n.to_string(),
                r.metric.clone(),
                format!("{:.4e}", r.mean),
                format!("{:.4e}", r.std),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut s = String::new();
    let line = |s: &mut String, cols: &[&str]| {
        for (i, (c, w)) in cols.iter().zip(widths).enumerate() {
            // Text columns left-aligned, numbers right-aligned.
            if i == 2 || i >= 4 {
                let _ = write!(s, "{c:>w$}");
            } else {
                let _ = write!(s, "{c:<w$}");
            }
            s.push_str(if i + 1 < cols.len() { "  " } else { "\n" });
        }
    };
    line(&mut s, &header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(&mut s, &rule.iter().map(String::as_str).collect::<Vec<_>>());
    for row in &cells {
        line(&mut s, &row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    s
}

/// Writes `rows` in `format` to `path`, or to stdout when `path` is `None`.
pub fn emit_report(rows: &[SummaryRow], format: Format, path: Option<&Path>) -> Result<()> {
    if rows.is_empty() {
        return Err(BenchError::Config("no rows to report".into()));
    }
    let mut sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    match format {
        Format::Csv => write_csv(rows, &mut sink)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, rows)?;
            writeln!(sink)?;
        }
        Format::Table => sink.write_all(render_table(rows).as_bytes())?,
    }
    sink.flush()?;
    Ok(())
}

/// Per-t departure profile as CSV with columns `t, delta_geo, delta_diag`.
pub fn write_profile_csv(records: &[DepartureRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
