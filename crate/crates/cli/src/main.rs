use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use reachkit_cli::config::RunConfig;
use reachkit_cli::{commands, exit_codes};

/// Data-driven reachability analysis: probabilistic reach-set estimates from
/// sampled trajectories.
#[derive(Parser)]
#[command(name = "reachkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct Common {
    /// Run configuration (TOML).
    #[arg(short, long)]
    config: PathBuf,
    /// Override the config's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the worker count (0 = automatic).
    #[arg(long)]
    workers: Option<usize>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the accuracy parameter.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Override the confidence parameter.
    #[arg(long)]
    delta: Option<f64>,
    /// Override the plot/check lattice resolution.
    #[arg(long)]
    grid_n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the estimator summary (dimension, parameters, required samples).
    Summary {
        #[command(flatten)]
        common: Common,
    },
    /// Draw the required number of samples and write them as CSV.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Draw exactly this many samples instead of the derived bound
        /// (voids the probabilistic guarantee).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Fit the reach-set estimate (or per-time tube) and serialize it.
    Estimate {
        #[command(flatten)]
        common: Common,
    },
    /// Check the estimate against the configured unsafe set / goal clauses.
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Emit plot artifacts (SVG and field CSV).
    Plot {
        #[command(flatten)]
        common: Common,
    },
}

fn load_config(common: &Common) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::from_path(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(workers) = common.workers {
        cfg.workers = Some(workers);
    }
    if let Some(out) = &common.out {
        cfg.outputs = out.clone();
    }
    if let Some(epsilon) = common.epsilon {
        cfg.probabilistic.epsilon = epsilon;
    }
    if let Some(delta) = common.delta {
        cfg.probabilistic.delta = delta;
    }
    if let Some(grid_n) = common.grid_n {
        cfg.plot.grid_n = grid_n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run() -> Result<i32, (i32, anyhow::Error)> {
    let cli = Cli::parse();
    let usage = |e| (exit_codes::USAGE, e);
    let runtime = |e| (exit_codes::RUNTIME, e);
    match cli.command {
        Command::Summary { common } => {
            let cfg = load_config(&common).map_err(usage)?;
            print!("{}", commands::cmd_summary(&cfg).map_err(runtime)?);
            Ok(exit_codes::OK)
        }
        Command::Sample { common, n } => {
            let cfg = load_config(&common).map_err(usage)?;
            print!("{}", commands::cmd_sample(&cfg, n).map_err(runtime)?);
            Ok(exit_codes::OK)
        }
        Command::Estimate { common } => {
            let cfg = load_config(&common).map_err(usage)?;
            print!("{}", commands::cmd_estimate(&cfg).map_err(runtime)?);
            Ok(exit_codes::OK)
        }
        Command::Check { common } => {
            let cfg = load_config(&common).map_err(usage)?;
            let outcome = commands::cmd_check(&cfg).map_err(runtime)?;
            print!("{}", outcome.report);
            Ok(outcome.exit)
        }
        Command::Plot { common } => {
            let cfg = load_config(&common).map_err(usage)?;
            print!("{}", commands::cmd_plot(&cfg).map_err(runtime)?);
            Ok(exit_codes::OK)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err((code, err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(code as u8)
        }
    }
}
