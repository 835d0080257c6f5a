//! Command-line front end for the Shapley-effect sensitivity engine.
//!
//! Verbs: `run` (replicated analysis of one model), `sweep` (one
//! correlation pair over a grid), `models` (registry listing), and
//! `oracle` (closed-form reference values where available).
//!
//! Exit codes: 0 success, 2 configuration error, 3 model evaluation
//! error, 4 unsupported problem dimension.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use shapley_effects::{
    exact_shapley, models, run_shapley, AnalysisOptions, Error, ShapleyReport, SubsetMask,
    SupersetEstimator,
};

use config::{ConfigError, Experiment, OutputFormat, Overrides};
use output::{RunDocument, SweepPoint};

const EXIT_CONFIG: u8 = 2;
const EXIT_EVALUATION: u8 = 3;
const EXIT_DIMENSION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "shapley",
    version,
    about = "Variance-based Shapley and Shapley-Owen sensitivity effects for black-box simulators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sensitivity analysis, optionally replicated.
    Run(RunArgs),
    /// Rerun an analysis over a grid of correlation values for one
    /// input pair.
    Sweep(SweepArgs),
    /// List the registered benchmark models.
    Models,
    /// Print analytic reference effects where a closed form exists.
    Oracle {
        #[arg(long)]
        model: String,
    },
}

#[derive(Args, Default)]
struct RunArgs {
    /// Model name from the registry (see `models`).
    #[arg(long)]
    model: Option<String>,
    /// Basic sample block size (powers of two recommended).
    #[arg(long)]
    n: Option<usize>,
    /// Scramble seed; 0 is the raw sequence. Replicates use seed,
    /// seed+1, ...
    #[arg(long)]
    seed: Option<u64>,
    /// Number of independent replicates.
    #[arg(long)]
    replicates: Option<usize>,
    /// moebius | permutation | both
    #[arg(long)]
    algorithm: Option<String>,
    /// subset | superset | both
    #[arg(long)]
    estimator: Option<String>,
    /// none | all-pairs | comma-separated groups like 1+3,2+4
    #[arg(long)]
    owen: Option<String>,
    /// Named dependence scenario (none, or weak/strong for
    /// fire-spread).
    #[arg(long)]
    scenario: Option<String>,
    /// TOML experiment file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | report
    #[arg(long)]
    format: Option<String>,
    /// Attach the full per-mask value and Moebius tables to each
    /// report (2^k entries per row; report format only).
    #[arg(long)]
    emit_tables: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// One-based input pair, e.g. 1,3.
    #[arg(long)]
    pair: String,
    /// Comma-separated rank-correlation grid, strictly inside (-1, 1).
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => command_run(args),
        Command::Sweep(args) => command_sweep(args),
        Command::Models => command_models(),
        Command::Oracle { model } => command_oracle(&model),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}

struct Failure {
    message: String,
    code: u8,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        self.code
    }

    fn config(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: EXIT_CONFIG,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_dimension_limit() {
            EXIT_DIMENSION
        } else if e.is_evaluation() {
            EXIT_EVALUATION
        } else {
            EXIT_CONFIG
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Message(m) => Failure::config(m),
            ConfigError::Engine(err) => err.into(),
        }
    }
}

fn load_experiment(args: RunArgs) -> Result<Experiment, Failure> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Failure::config(format!("cannot read config {}: {e}", path.display()))
            })?;
            toml::from_str(&text)
                .map_err(|e| Failure::config(format!("bad config {}: {e}", path.display())))?
        }
        None => config::FileSpec::default(),
    };
    let overrides = Overrides {
        model: args.model,
        n: args.n,
        seed: args.seed,
        replicates: args.replicates,
        algorithm: args.algorithm,
        estimator: args.estimator,
        owen: args.owen,
        scenario: args.scenario,
        format: args.format,
        out: args.out,
        emit_tables: args.emit_tables,
    };
    Ok(config::resolve(file, overrides)?)
}

/// Replicated runs of one algorithm; replicate r uses seed + r.
fn replicated_reports(
    experiment: &Experiment,
    algorithm: shapley_effects::Algorithm,
) -> Result<Vec<ShapleyReport>, Failure> {
    let transform = experiment.transform()?;
    let options = AnalysisOptions {
        algorithm,
        superset: SupersetEstimator::Auto,
        owen: experiment.owen.clone(),
        include_tables: experiment.emit_tables,
    };
    let reports: Result<Vec<ShapleyReport>, Error> = (0..experiment.replicates as u64)
        .into_par_iter()
        .map(|r| {
            run_shapley(
                &experiment.model,
                &transform,
                experiment.n,
                experiment.seed + r,
                &options,
            )
        })
        .collect();
    let reports = reports?;
    for warning in reports.first().map(|r| r.warnings.as_slice()).unwrap_or(&[]) {
        eprintln!("warning: {warning}");
    }
    Ok(reports)
}

fn emit(experiment: &Experiment, text: String) -> Result<(), Failure> {
    match &experiment.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn command_run(args: RunArgs) -> Result<(), Failure> {
    let experiment = load_experiment(args)?;
    let mut runs = Vec::new();
    for &algorithm in &experiment.algorithms {
        runs.push((algorithm, replicated_reports(&experiment, algorithm)?));
    }

    let text = match experiment.format {
        OutputFormat::Csv => output::render_run_csv(&experiment, &runs),
        OutputFormat::Report => {
            let aggregates = runs
                .iter()
                .map(|(algorithm, reports)| output::aggregate(&experiment, *algorithm, reports))
                .collect();
            let document = RunDocument {
                model: experiment.model_name.clone(),
                n: experiment.n,
                seed: experiment.seed,
                replicate_count: experiment.replicates,
                aggregates,
                replicates: runs.into_iter().flat_map(|(_, r)| r).collect(),
            };
            output::render_run_json(&document)
        }
    };
    emit(&experiment, text)
}

fn command_sweep(args: SweepArgs) -> Result<(), Failure> {
    let pair: Vec<usize> = args
        .pair
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::config(format!("bad pair '{}' (expected i,j)", args.pair)))?;
    let [i, j] = pair[..] else {
        return Err(Failure::config(format!(
            "bad pair '{}' (expected two one-based indices)",
            args.pair
        )));
    };
    if i == 0 || j == 0 || i == j {
        return Err(Failure::config(
            "pair indices must be distinct and one-based",
        ));
    }
    let grid: Vec<f64> = args
        .grid
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::config(format!("bad grid '{}'", args.grid)))?;
    if grid.iter().any(|v| v.abs() >= 1.0) {
        return Err(Failure::config(
            "grid values must lie strictly inside (-1, 1); the endpoints are singular",
        ));
    }

    let experiment = load_experiment(args.run)?;
    let k = experiment.model.dim();
    if i > k || j > k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: i.max(j),
        }
        .into());
    }

    let mut points = Vec::new();
    for &rho in &grid {
        let mut point = experiment.shallow_clone();
        point.dependence = point.dependence.with_pair(i - 1, j - 1, rho)?;
        for &algorithm in &point.algorithms {
            let reports = replicated_reports(&point, algorithm)?;
            points.push(SweepPoint {
                rho,
                aggregate: output::aggregate(&point, algorithm, &reports),
            });
        }
    }

    let text = match experiment.format {
        OutputFormat::Csv => output::render_sweep_csv(&points),
        OutputFormat::Report => output::render_sweep_json(&points),
    };
    emit(&experiment, text)
}

fn command_models() -> Result<(), Failure> {
    for name in models::NAMES {
        let setup = models::by_name(name)?;
        println!("{name}  (k = {})  {}", setup.model.dim(), setup.description);
    }
    Ok(())
}

fn command_oracle(model: &str) -> Result<(), Failure> {
    // Validates the name even when no oracle exists.
    let _ = models::by_name(model)?;
    let game = match model {
        "ishigami" => shapley_effects::ishigami_game(),
        "sobol-g" => shapley_effects::gfunction_game(&models::sobol_g::A_STANDARD),
        other => {
            println!("no analytic oracle available for '{other}'");
            return Ok(());
        }
    };
    let exact = exact_shapley(&game)?;
    println!("model: {model}");
    for i in 0..game.k() {
        println!(
            "input {}: shapley {:.6}  first-order {:.6}  total {:.6}",
            i + 1,
            exact.phi[i],
            exact.first_order[i],
            exact.total[i]
        );
    }
    for mask in SubsetMask::all_pairs(game.k()) {
        let value = exact.shapley_owen(mask);
        if value.abs() > 1e-12 {
            println!("group {}: shapley-owen {:.6}", mask.label(), value);
        }
    }
    Ok(())
}
