//! Command line front end for PST-based sample size determination.
//!
//! Subcommands: `pst` (evaluate one design), `sweep` (grid to CSV), `size`
//! (smallest n meeting a target, or a frequentist comparator), `fit`
//! (hyperparameters from moments), `verify` (closed form against Monte
//! Carlo). A run is configured by a JSON document passed with `--config`,
//! either a file path or the name of a bundled example scenario; individual
//! flags override config fields.

pub mod commands;
pub mod config;
pub mod error;
pub mod presets;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::commands::{FitArgs, SizeArgs};
use crate::config::{OutputFormat, RunConfig};
use crate::error::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "pst",
    version,
    about = "Bayesian sample size determination via the probability of a successful trial"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file path, or the name of a bundled scenario
    /// (table1a, table1b, table2, fig1, fig2, fig3, fig4).
    #[arg(long, global = true, value_name = "PATH|NAME")]
    config: Option<String>,

    /// Random seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte Carlo replications; overrides the config.
    #[arg(long, global = true)]
    reps: Option<u64>,

    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format for sweeps.
    #[arg(long, global = true, value_name = "FORMAT")]
    format: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the probability of a successful trial at one sample size.
    Pst {
        /// Total sample size; overrides the config's "n".
        #[arg(long)]
        n: Option<u32>,
    },
    /// Evaluate a grid of sample sizes (optionally varying one parameter)
    /// and emit CSV.
    Sweep,
    /// Find the smallest total meeting a psi or psi_star target, or compute
    /// the classical power-based size with --frequentist.
    Size {
        #[arg(long)]
        target: Option<f64>,
        /// Target curve: psi or psi_star.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        step: Option<u32>,
        /// Classical power calculation instead of a PST target.
        #[arg(long)]
        frequentist: bool,
        /// Known standard deviation (frequentist mode).
        #[arg(long)]
        sd: Option<f64>,
        /// Fixed alternative treatment effect (frequentist mode).
        #[arg(long)]
        delta_star: Option<f64>,
        /// One-sided significance level (frequentist mode).
        #[arg(long)]
        alpha: Option<f64>,
        /// Required power (frequentist mode).
        #[arg(long)]
        power: Option<f64>,
        /// Allocation ratio n_E / n_C (frequentist mode).
        #[arg(long)]
        ratio: Option<f64>,
    },
    /// Solve prior hyperparameters from moments (mixture or gamma).
    Fit {
        /// Fit kind: mixture or gamma.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        skeptical_weight: Option<f64>,
        #[arg(long)]
        skeptical_precision: Option<f64>,
        #[arg(long)]
        mean: Option<f64>,
        #[arg(long)]
        variance: Option<f64>,
        #[arg(long)]
        sd: Option<f64>,
    },
    /// Cross-check the closed form against Monte Carlo over a grid.
    Verify {
        /// Multiply the closed-form branch's precision by this factor
        /// (harness self-test; anything but 1 should fail).
        #[arg(long, hide = true, default_value_t = 1.0)]
        perturb_tau: f64,
    },
}

/// Resolves --config: an existing file wins, then a bundled scenario name.
fn load_config(arg: &str) -> CliResult<RunConfig> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        return RunConfig::from_json(&text);
    }
    match presets::preset(arg) {
        Some(text) => RunConfig::from_json(text),
        None => Err(CliError::Config(format!(
            "unknown config {arg:?}: not a readable file, and the bundled scenarios are {}",
            presets::preset_names().join(", ")
        ))),
    }
}

fn require_config(cli: &Cli) -> CliResult<RunConfig> {
    let arg = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("missing --config".into()))?;
    let mut cfg = load_config(arg)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(reps) = cli.reps {
        cfg.reps = reps;
    }
    if let Some(format) = cli.format {
        cfg.format = format;
    }
    Ok(cfg)
}

fn optional_config(cli: &Cli) -> CliResult<Option<RunConfig>> {
    match cli.config.as_deref() {
        None => Ok(None),
        Some(_) => require_config(cli).map(Some),
    }
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    // The --out flag wins over the config's "out" entry.
    let config_out = |cfg: &RunConfig| -> Option<PathBuf> {
        cli.out
            .clone()
            .or_else(|| cfg.out.as_ref().map(PathBuf::from))
    };
    match &cli.command {
        Command::Pst { n } => {
            let cfg = require_config(cli)?;
            let out = config_out(&cfg);
            commands::cmd_pst(&cfg, *n, out.as_deref())
        }
        Command::Sweep => {
            let cfg = require_config(cli)?;
            let out = config_out(&cfg);
            commands::cmd_sweep(&cfg, out.as_deref())
        }
        Command::Size {
            target,
            kind,
            n_max,
            step,
            frequentist,
            sd,
            delta_star,
            alpha,
            power,
            ratio,
        } => {
            let cfg = optional_config(cli)?;
            let out = cfg
                .as_ref()
                .map(&config_out)
                .unwrap_or_else(|| cli.out.clone());
            let args = SizeArgs {
                target: *target,
                kind: kind.clone(),
                n_max: *n_max,
                step: *step,
                frequentist: *frequentist,
                sd: *sd,
                delta_star: *delta_star,
                alpha: *alpha,
                power: *power,
                ratio: *ratio,
            };
            commands::cmd_size(cfg.as_ref(), &args, out.as_deref())
        }
        Command::Fit {
            kind,
            skeptical_weight,
            skeptical_precision,
            mean,
            variance,
            sd,
        } => {
            let cfg = optional_config(cli)?;
            let out = cfg
                .as_ref()
                .map(&config_out)
                .unwrap_or_else(|| cli.out.clone());
            let args = FitArgs {
                kind: kind.clone(),
                skeptical_weight: *skeptical_weight,
                skeptical_precision: *skeptical_precision,
                mean: *mean,
                variance: *variance,
                sd: *sd,
            };
            commands::cmd_fit(cfg.as_ref(), &args, out.as_deref())
        }
        Command::Verify { perturb_tau } => {
            let cfg = require_config(cli)?;
            let out = config_out(&cfg);
            commands::cmd_verify(&cfg, *perturb_tau, out.as_deref())
        }
    }
}

/// Parses arguments, runs the command, and returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version to stdout (exit 0) and usage errors
            // to stderr (exit 2).
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
