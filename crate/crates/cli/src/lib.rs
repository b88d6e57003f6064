//! Batch front-end for the sparse-exposure engine: configuration loading,
//! run orchestration and reporting.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};

use commands::{RunMode, Sweep};
use config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "sparse-exposure", version, about = "Exposure profiles via stochastic collocation on sparse grids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Proxy,
    Brute,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate, build proxies and write exposure profiles.
    Run {
        /// Path to the TOML run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output directory for CSV profiles and the summary.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the run mode (proxy | brute | both).
        #[arg(long, value_enum, default_value_t = ModeArg::Proxy)]
        mode: ModeArg,
        /// Worker thread count (defaults to all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Override the simulation seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print tensor-product and sparse-grid node counts per dimension.
    GridReport {
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        #[arg(long, default_value_t = 4)]
        max_level: usize,
    },
    /// Convergence study: a brute-force reference plus a sweep of proxy
    /// runs on identical paths.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Sparse-grid levels to sweep, e.g. --levels 1,2,3.
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<usize>>,
        /// Collocation point counts to sweep, e.g. --points 2,3,4,5,6.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<usize>>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Runs a closure inside a rayon pool of the requested size; `None` keeps
/// the default pool.
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        None => f(),
        Some(n) => {
            if n == 0 {
                bail!("--threads must be positive");
            }
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            pool.install(f)
        }
    }
}

/// Executes a parsed command, returning the text it printed.
pub fn execute(command: Command) -> Result<String> {
    match command {
        Command::Run { config, out, mode, threads, seed } => {
            let cfg = RunConfig::load(&config)?;
            let mode = match mode {
                ModeArg::Proxy => RunMode::Proxy,
                ModeArg::Brute => RunMode::Brute,
                ModeArg::Both => RunMode::Both,
            };
            with_threads(threads, || commands::run(&cfg, &out, mode, seed))
        }
        Command::GridReport { max_dim, max_level } => commands::grid_report(max_dim, max_level),
        Command::Convergence { config, out, levels, points, threads, seed } => {
            let cfg = RunConfig::load(&config)?;
            let sweep = match (levels, points) {
                (Some(l), None) => Sweep::Levels(l),
                (None, Some(p)) => Sweep::Points(p),
                (None, None) => bail!("provide a sweep: --levels or --points"),
                (Some(_), Some(_)) => bail!("--levels and --points are mutually exclusive"),
            };
            with_threads(threads, || commands::convergence(&cfg, &out, sweep, seed))
        }
    }
}
