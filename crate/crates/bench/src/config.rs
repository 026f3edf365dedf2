use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::{BenchError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Pairwise,
    Departure,
    Barycenter,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Pairwise => "pairwise",
            ExperimentKind::Departure => "departure",
            ExperimentKind::Barycenter => "barycenter",
        }
    }

    pub fn default_sizes(self) -> Vec<usize> {
        match self {
            ExperimentKind::Pairwise => vec![8, 16, 32, 64, 128],
            ExperimentKind::Departure => vec![32],
            ExperimentKind::Barycenter => vec![8],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub experiment: ExperimentKind,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    /// Largest `n` for which the ambient `n² × n²` computation is run.
    pub ambient_cutoff: usize,
    /// Standard deviation of the log-coordinates in the generic departure regime.
    pub generic_scale: f64,
    /// Number of data points per barycenter instance.
    pub count: usize,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            seed: 42,
            trials: 20,
            sizes: experiment.default_sizes(),
            experiment,
            output_path: None,
            format: Format::Table,
            ambient_cutoff: 64,
            generic_scale: 1.0,
            count: 8,
        }
    }

    pub fn with_sizes(mut self, sizes: Vec<usize>) -> Self {
        self.sizes = sizes;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(BenchError::Config("trials must be at least 1".into()));
        }
        if self.sizes.is_empty() {
            return Err(BenchError::Config("sizes must be nonempty".into()));
        }
        if self.sizes.contains(&0) {
            return Err(BenchError::Config("sizes must be positive".into()));
        }
        if self.experiment == ExperimentKind::Departure && self.sizes.contains(&1) {
            return Err(BenchError::Config("departure moduli need n >= 2".into()));
        }
        if !(self.generic_scale > 0.0 && self.generic_scale.is_finite()) {
            return Err(BenchError::Config("generic scale must be positive".into()));
        }
        if self.count == 0 {
            return Err(BenchError::Config("barycenter data count must be at least 1".into()));
        }
        Ok(())
    }

    /// `seed + trial_index`, wrapping.
    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }
}
