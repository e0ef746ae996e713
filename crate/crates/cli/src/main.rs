//! `stackstab`: train ensembles, estimate their stability, and evaluate the
//! matching stability and generalization bounds.
//!
//! Subcommands: `gen-data`, `stability`, `bounds`, `equivalence`,
//! `experiment`. Each experiment-style command reads one JSON config
//! (`--config`), allows dotted-path overrides (`--set key.path=value`) and a
//! `--seed` shorthand, writes the JSON report to stdout or `--out`, and
//! prints a one-line summary to stderr.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 config/usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stackstab_cli::commands::gen_data::GenDataArgs;
use stackstab_cli::report::{self, ReportBuilder};
use stackstab_cli::{commands, config, CliError};

#[derive(Debug, Parser)]
#[command(name = "stackstab", version, about = "Ensemble stability workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cap the worker-thread count; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Override a config key by dotted path, e.g. --set trials=800 or
    /// --set source.blobs.m=25. Values parse as JSON, else as strings.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic dataset as CSV.
    GenData(GenDataArgs),
    /// Estimate hypothesis / pointwise stability by Monte-Carlo trials.
    Stability(RunArgs),
    /// Evaluate closed-form stability and generalization bounds.
    Bounds(RunArgs),
    /// Check the bag-stacking = weighted-bagging identity.
    Equivalence(RunArgs),
    /// Composed run: training, errors, stability, and bounds.
    Experiment(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Run `body` inside a rayon pool of the requested size. Reductions are
/// fixed-order everywhere, so the pool size cannot change any result.
fn with_threads<T>(
    threads: Option<usize>,
    body: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError>
where
    T: Send,
{
    match threads {
        None => body(),
        Some(n) => {
            if n == 0 {
                return Err(CliError::config("--threads must be >= 1"));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::runtime_msg(format!("thread pool: {e}")))?;
            pool.install(body)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenData(args) => commands::gen_data::run(args),
        Command::Stability(args) => {
            let cfg: config::StabilityConfig =
                config::load_config(args.config.as_deref(), args.seed, &args.overrides)?;
            let builder = ReportBuilder::new("stability", args.threads);
            let (results, summary) = with_threads(args.threads, || commands::stability::run(&cfg))?;
            let report = builder.finish(&cfg, &results)?;
            report::emit(&report, args.out.as_deref(), &summary)
        }
        Command::Bounds(args) => {
            let cfg: config::BoundsConfig =
                config::load_config(args.config.as_deref(), args.seed, &args.overrides)?;
            let builder = ReportBuilder::new("bounds", args.threads);
            let (results, summary) = with_threads(args.threads, || commands::bounds::run(&cfg))?;
            let report = builder.finish(&cfg, &results)?;
            report::emit(&report, args.out.as_deref(), &summary)
        }
        Command::Equivalence(args) => {
            let cfg: config::EquivalenceConfig =
                config::load_config(args.config.as_deref(), args.seed, &args.overrides)?;
            let builder = ReportBuilder::new("equivalence", args.threads);
            let (results, summary) =
                with_threads(args.threads, || commands::equivalence::run(&cfg))?;
            let report = builder.finish(&cfg, &results)?;
            report::emit(&report, args.out.as_deref(), &summary)
        }
        Command::Experiment(args) => {
            let cfg: config::ExperimentConfig =
                config::load_config(args.config.as_deref(), args.seed, &args.overrides)?;
            let builder = ReportBuilder::new("experiment", args.threads);
            let (results, summary) =
                with_threads(args.threads, || commands::experiment::run(&cfg))?;
            let report = builder.finish(&cfg, &results)?;
            report::emit(&report, args.out.as_deref(), &summary)
        }
    }
}
