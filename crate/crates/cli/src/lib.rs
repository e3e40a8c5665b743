//! Command-line front end: configuration parsing, presets, dispatch of the
//! five subcommands, and reproducible tabular outputs with run manifests.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod output;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

/// Environment variable selecting the worker-thread count.
pub const THREADS_ENV: &str = "CAVITY_COOLING_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "cavity-cooling",
    version,
    about = "Cooling and trapping of a single atom in an intracavity FORT: \
             coefficient sweeps, dressed-state analytics and Langevin ensembles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Named parameter preset (paper-10MHz, paper-50MHz,
    /// paper-50MHz-equalshift, paper-adverse).
    #[arg(long)]
    pub preset: Option<String>,
    /// TOML config file, or a manifest.json from a previous run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the FORT anti-node atlas (well index, position, coupling).
    Wells {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep position and emit steady-state observables, friction and
    /// diffusion coefficients.
    Coefficients {
        #[command(flatten)]
        common: CommonArgs,
        /// Sweep start, units of lambdaF.
        #[arg(long)]
        zmin: Option<f64>,
        /// Sweep end, units of lambdaF.
        #[arg(long)]
        zmax: Option<f64>,
        /// Number of sweep points.
        #[arg(long)]
        nz: Option<usize>,
        /// Also report the photon-cutoff convergence estimate in the manifest.
        #[arg(long)]
        check_convergence: bool,
    },
    /// Sweep position on axis and emit the dressed-state analytics.
    Dressed {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        zmin: Option<f64>,
        #[arg(long)]
        zmax: Option<f64>,
        #[arg(long)]
        nz: Option<usize>,
    },
    /// Scan the drive strength and emit well-averaged coefficients.
    Saturation {
        #[command(flatten)]
        common: CommonArgs,
        /// Well index for the averages.
        #[arg(long)]
        well: Option<usize>,
    },
    /// Integrate a trajectory ensemble and emit trapping statistics.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of trajectories.
        #[arg(long)]
        n: Option<usize>,
        /// Base seed for the ensemble.
        #[arg(long)]
        seed: Option<u64>,
        /// Time step in nanoseconds.
        #[arg(long)]
        dt: Option<f64>,
        /// Trajectory cap in milliseconds.
        #[arg(long)]
        tmax: Option<f64>,
        /// Well index.
        #[arg(long)]
        well: Option<usize>,
        /// Grid nodes along z.
        #[arg(long)]
        nz: Option<usize>,
        /// Grid nodes along rho.
        #[arg(long)]
        nrho: Option<usize>,
    },
}

/// Configure the global worker pool from the environment. Safe to call
/// more than once; only the first call takes effect.
pub fn init_threads() {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    init_threads();
    match cli.command {
        Command::Wells { common } => commands::wells::run(&common),
        Command::Coefficients {
            common,
            zmin,
            zmax,
            nz,
            check_convergence,
        } => commands::coefficients::run(&common, zmin, zmax, nz, check_convergence),
        Command::Dressed {
            common,
            zmin,
            zmax,
            nz,
        } => commands::dressed::run(&common, zmin, zmax, nz),
        Command::Saturation { common, well } => commands::saturation::run(&common, well),
        Command::Simulate {
            common,
            n,
            seed,
            dt,
            tmax,
            well,
            nz,
            nrho,
        } => commands::simulate::run(&common, n, seed, dt, tmax, well, nz, nrho),
    }
}
