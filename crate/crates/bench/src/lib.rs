//! Reproducible experiments for the `kronbures` geometry crate.
//!
//! Every trial draws from its own `ChaCha8Rng` stream seeded with
//! `seed + trial_index`, so a given configuration yields bit-identical
//! metric values (timings aside) on every run and thread count.

pub mod barycenter;
pub mod config;
pub mod departure;
pub mod gen;
pub mod pairwise;
pub mod report;

pub use config::{ExperimentConfig, ExperimentKind, Format};
pub use report::{emit_report, summarize, ExperimentOutput, SummaryRow, TrialRecord};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("numerical consistency failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Core(#[from] kronbures::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl BenchError {
    /// Process exit code: 2 for configuration errors, 3 for numerical
    /// consistency failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 2,
            BenchError::Numerical(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

/// Builds the global rayon pool, honoring `KRONBURES_THREADS`.
pub fn init_thread_pool() -> Result<()> {
    let Ok(raw) = std::env::var("KRONBURES_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| BenchError::Config(format!("KRONBURES_THREADS must be a positive integer, got {raw:?}")))?;
    // A pool that already exists (e.g. in tests) keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}
