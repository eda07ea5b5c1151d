mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::OmegaArgs;
use config::ExperimentConfig;

/// Linearly implicit reference-state schemes for weakly compressible Euler:
/// runs, ε-sweeps and asymptotic checks.
#[derive(Parser)]
#[command(name = "stiff-euler", version)]
struct Cli {
    /// TOML experiment config; every key has a default.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (falls back to STIFF_EULER_OUT, then the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomly generated test states.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one initial field for `n_steps`.
    Run,
    /// Fit ε-slopes of the low Mach fluctuations on 2D well-prepared data.
    SweepEps {
        /// Sweep with the previous-step and the constant reference in turn.
        #[arg(long)]
        both: bool,
    },
    /// ε-scaling of the linearized pressure after one Fourier-exact step.
    OraclePl,
    /// Δt-scaling of the flux linearization error.
    Superconsistency,
    /// Grid refinement at several ε against a fine-grid solution.
    Refine,
    /// Print the coefficients ω₀..ω₃ of the Fourier-space pressure relation.
    Omega {
        #[arg(long, default_value_t = 1.4)]
        gamma: f64,
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
        #[arg(long, default_value_t = 1.0)]
        velocity: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 2.5)]
        energy: f64,
        #[arg(long, default_value_t = 1.0)]
        pressure: f64,
    },
    /// Compare analytic flux Jacobians with finite differences on random states.
    CheckJacobians {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

fn execute(cli: Cli) -> Result<bool> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out = commands::output_dir(cli.out, &cfg);
    match cli.command {
        Command::Run => commands::cmd_run(&cfg, &out),
        Command::SweepEps { both } => commands::cmd_sweep_eps(&cfg, &out, both),
        Command::OraclePl => commands::cmd_oracle_pl(&cfg, &out),
        Command::Superconsistency => commands::cmd_superconsistency(&cfg, &out),
        Command::Refine => commands::cmd_refine(&cfg, &out),
        Command::Omega {
            gamma,
            dt,
            velocity,
            rho,
            energy,
            pressure,
        } => {
            let args = OmegaArgs {
                gamma,
                dt,
                velocity,
                rho,
                energy,
                pressure,
            };
            print!("{}", commands::cmd_omega(&args)?);
            Ok(true)
        }
        Command::CheckJacobians { count } => {
            let (table, ok) = commands::cmd_check_jacobians(cfg.seed, count)?;
            print!("{table}");
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
