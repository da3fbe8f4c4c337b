use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use restart_cma::harness::{
    aggregate, emit_reports, grid_scan, load_records, run_experiment, ExperimentConfig, GridSpec,
    SEED_ENV,
};
use restart_cma::objectives::registry;
use restart_cma::make_function;

#[derive(Parser, Debug)]
#[command(name = "restart-cma", version, about = "Restarted weighted active CMA-ES experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Base seed. Overrides RESTART_CMA_SEED and the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Scan the (λ, σ0) grid of one function.
    Grid {
        #[arg(long)]
        function: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 15)]
        trials: usize,
        /// Evaluation budget per run (default 1e4·D).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 1)]
        instance_seed: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest λ exponent: λ = 2^k·λ_default for k = 0..=max.
        #[arg(long, default_value_t = 9)]
        max_lambda_exp: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Recompute ERT/SP1 tables from stored run records.
    Ert {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        delta_f: Vec<f64>,
        /// Also write ert.csv and ert.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the registered benchmark functions.
    ListFunctions,
}

fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        builder = builder.num_threads(n);
    }
    builder.build().context("building thread pool")
}

fn run(config: PathBuf, out: Option<PathBuf>, seed: Option<u64>, threads: Option<usize>) -> Result<()> {
    let cfg = ExperimentConfig::load(&config)?;
    let base_seed = match seed {
        Some(s) => s,
        None => cfg.resolved_seed(std::env::var(SEED_ENV).ok().as_deref())?,
    };
    let out = out.or_else(|| cfg.output_dir.clone());
    let pool = thread_pool(threads)?;
    let output = pool.install(|| run_experiment(&cfg, base_seed, out.as_deref()))?;
    eprintln!(
        "{} trials, base seed {base_seed}, {} files written",
        output.records.len(),
        output.written.len()
    );
    print!("{}", output.report.to_csv());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn grid(
    function: &str,
    dim: usize,
    trials: usize,
    budget: Option<u64>,
    instance_seed: u64,
    seed: u64,
    max_lambda_exp: u32,
    out: Option<PathBuf>,
    threads: Option<usize>,
) -> Result<()> {
    let objective = make_function(function, dim, instance_seed)?;
    let mut spec = GridSpec::new(trials, budget.unwrap_or(10_000 * dim as u64));
    spec.lambda_exponents = (0..=max_lambda_exp).collect();
    spec.base_seed = seed;
    let report = thread_pool(threads)?.install(|| grid_scan(&objective, &spec))?;
    print!("{}", report.render());
    if let Some(dir) = out {
        let (csv, json) = report.emit(&dir)?;
        eprintln!("wrote {} and {}", csv.display(), json.display());
    }
    Ok(())
}

fn ert(records: PathBuf, delta_f: Vec<f64>, out: Option<PathBuf>) -> Result<()> {
    let records = load_records(&records)?;
    if records.is_empty() {
        bail!("no run records found");
    }
    let report = aggregate(&records, &delta_f)?;
    print!("{}", report.to_csv());
    if let Some(dir) = out {
        emit_reports(&report, &dir)?;
    }
    Ok(())
}

fn list_functions() {
    for f in registry() {
        println!("{:<22} {:<4} {}", f.name, f.bbob_like, f.description);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            seed,
            threads,
        } => run(config, out, seed, threads),
        Command::Grid {
            function,
            dim,
            trials,
            budget,
            instance_seed,
            seed,
            max_lambda_exp,
            out,
            threads,
        } => grid(
            &function,
            dim,
            trials,
            budget,
            instance_seed,
            seed,
            max_lambda_exp,
            out,
            threads,
        ),
        Command::Ert {
            records,
            delta_f,
            out,
        } => ert(records, delta_f, out),
        Command::ListFunctions => {
            list_functions();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
