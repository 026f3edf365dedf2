use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kronbures::barycenter::{slice_barycenter, SliceData};
use kronbures::closure::{direct_leaf_verdict, endpoint_rigidity_classify, RESIDUAL_TOL};
use kronbures::kron::pairwise_bures_sq_reduced;
use kronbures::KroneckerPoint;
use kronbures_bench::barycenter::run_barycenter_experiment;
use kronbures_bench::departure::run_departure_experiment;
use kronbures_bench::pairwise::run_pairwise_experiment;
use kronbures_bench::report::write_profile_csv;
use kronbures_bench::{
    emit_report, init_thread_pool, BenchError, ExperimentConfig, ExperimentKind, ExperimentOutput, Format, Result,
};
use serde::Deserialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "kronbures", version, about = "Bures geometry of Kronecker covariances: benchmarks and diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ambient vs reduced pairwise distance: timing and accuracy.
    Pairwise(RunArgs),
    /// Departure moduli of fixed-chart geodesics.
    Departure(RunArgs),
    /// Slice barycenters: Perron formula vs log-coordinate solver.
    Barycenter(RunArgs),
    /// All three experiments.
    All(RunArgs),
    /// Distance and closure verdict for a pair of Kronecker points.
    Endpoints {
        /// JSON file `{"p0": {"n", "u", "v"}, "p1": {...}}`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Exact barycenter of slice data.
    Slice {
        /// JSON file `{"n", "N", "weights", "u_eigs", "v_eigs"}`.
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Comma-separated sizes; defaults depend on the experiment.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest n for which the ambient evaluation is run.
    #[arg(long, default_value_t = 64)]
    ambient_cutoff: usize,
    /// Write the per-t departure profile of one generic draw as CSV.
    #[arg(long)]
    profile_out: Option<PathBuf>,
    /// Standard deviation of the departure log-coordinates.
    #[arg(long, default_value_t = 1.0)]
    generic_scale: f64,
}

impl RunArgs {
    fn config(&self, kind: ExperimentKind) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(kind);
        cfg.seed = self.seed;
        cfg.trials = self.trials;
        if let Some(sizes) = &self.sizes {
            cfg.sizes = sizes.clone();
        }
        cfg.format = self.format;
        cfg.output_path = self.out.clone();
        cfg.ambient_cutoff = self.ambient_cutoff;
        cfg.generic_scale = self.generic_scale;
        cfg
    }
}

fn run_experiment(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    match kind {
        ExperimentKind::Pairwise => run_pairwise_experiment(cfg),
        ExperimentKind::Departure => run_departure_experiment(cfg),
        ExperimentKind::Barycenter => run_barycenter_experiment(cfg),
    }
}

fn run(args: &RunArgs, kinds: &[ExperimentKind]) -> Result<()> {
    let configs: Vec<ExperimentConfig> = kinds.iter().map(|&k| args.config(k)).collect();
    for cfg in &configs {
        cfg.validate()?;
    }
    let mut out = ExperimentOutput::default();
    for (kind, cfg) in kinds.iter().zip(&configs) {
        out.extend(run_experiment(*kind, cfg)?);
    }
    emit_report(&out.rows, args.format, args.out.as_deref())?;
    if let Some(path) = &args.profile_out {
        match &out.profile {
            Some(profile) => write_profile_csv(profile, path)?,
            None => return Err(BenchError::Config("--profile-out needs the departure experiment".into())),
        }
    }
    if !out.violations.is_empty() {
        for v in &out.violations {
            eprintln!("{v}");
        }
        return Err(BenchError::Numerical(format!("{} consistency check(s) failed", out.violations.len())));
    }
    Ok(())
}

#[derive(Deserialize)]
struct PairInput {
    p0: KroneckerPoint,
    p1: KroneckerPoint,
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(BenchError::from)
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| BenchError::Config(format!("invalid input: {e}")))
}

fn endpoints(input: &PathBuf) -> Result<()> {
    let pair: PairInput = parse(&read(input)?)?;
    let (d2, spectrum) = pairwise_bures_sq_reduced(&pair.p0, &pair.p1)?;
    let report = endpoint_rigidity_classify(&pair.p0, &pair.p1, RESIDUAL_TOL).map_err(|e| match e {
        kronbures::Error::InconsistentVerdict { .. } => BenchError::Numerical(e.to_string()),
        e => e.into(),
    })?;
    let direct = direct_leaf_verdict(&pair.p0, &pair.p1, RESIDUAL_TOL);
    let value = json!({
        "bures_sq": d2,
        "alpha": spectrum.alpha.as_slice(),
        "beta": spectrum.beta.as_slice(),
        "residual_norm": report.residual_norm,
        "verdict": format!("{:?}", report.verdict),
        "direct_verdict": format!("{:?}", direct),
    });
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn slice(input: &PathBuf) -> Result<()> {
    let data: SliceData = parse(&read(input)?)?;
    let sol = slice_barycenter(&data)?;
    let value = json!({
        "x_star": sol.x_star.as_slice(),
        "y_star": sol.y_star.as_slice(),
        "min_value": sol.min_value,
        "sigma1": sol.perron.sigma1,
    });
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_thread_pool().and_then(|()| match &cli.command {
        Command::Pairwise(a) => run(a, &[ExperimentKind::Pairwise]),
        Command::Departure(a) => run(a, &[ExperimentKind::Departure]),
        Command::Barycenter(a) => run(a, &[ExperimentKind::Barycenter]),
        Command::All(a) => run(
            a,
            &[ExperimentKind::Pairwise, ExperimentKind::Departure, ExperimentKind::Barycenter],
        ),
        Command::Endpoints { input } => endpoints(input),
        Command::Slice { input } => slice(input),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
