//! `padyn`: classify, iterate and verify `f(x) = a x^2 / (b x + 1)` over `Q_p`.
//!
//! Exit status: 0 when every check passes, 1 when a verification check
//! fails, 2 on a usage or configuration error.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;
use report::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] padyn_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Parser)]
#[command(name = "padyn", version, about = "p-adic dynamics of a x^2/(b x + 1)")]
struct Cli {
    /// Print the built-in demonstration instances and exit.
    #[arg(long)]
    list_instances: bool,
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    #[arg(short = 'p', long = "prime", global = true)]
    p: Option<u32>,
    /// Rational as `n`, `n/d` or `P^V*U`.
    #[arg(short = 'a', global = true, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(short = 'b', global = true, allow_hyphen_values = true)]
    b: Option<String>,
    /// Digits of absolute precision kept when orbits are truncated.
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true, env = "PADYN_SEED")]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    iters: Option<usize>,
    #[arg(short = 'm', long = "sphere-exp", global = true)]
    sphere_exp: Option<i64>,
    #[arg(long = "residue-exp", global = true)]
    residue_exp: Option<u32>,
    /// Directory for report.csv and report.ndjson.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write only one of the two reports: `csv` or `records`.
    #[arg(long, global = true)]
    format: Option<String>,
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Case tag and the quantities it is decided from.
    Classify,
    /// Trajectory table from a start point.
    Orbit {
        /// `x1`, `x2`, `pole` or a rational.
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
    },
    /// Prescribed balls around both fixed points, with the radius cross-check.
    Regions,
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: Option<String>,
    },
    /// Two-ball invariant sets on a sphere around the indifferent fixed point.
    Ergodicity,
}

impl CommonArgs {
    fn to_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            p: self.p,
            a: self.a.clone(),
            b: self.b.clone(),
            precision: self.precision,
            seed: self.seed,
            samples: self.samples,
            iters: self.iters,
            sphere_exp: self.sphere_exp,
            residue_exp: self.residue_exp,
            start: None,
            suite: None,
            out: self.out.clone(),
            format: self.format.clone(),
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let started = Instant::now();
    let base = match &cli.common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let mut flags = cli.common.to_config();
    let outcome = if cli.list_instances {
        commands::list_instances()
    } else {
        let Some(command) = cli.command else {
            return Err(CliError::Config(
                "no command given; try `padyn --help`".into(),
            ));
        };
        let (name, run): (&str, fn(&ExperimentConfig) -> Result<_, _>) = match command {
            Command::Classify => ("classify", commands::cmd_classify),
            Command::Orbit { start } => {
                flags.start = start;
                ("orbit", commands::cmd_orbit)
            }
            Command::Regions => ("regions", commands::cmd_regions),
            Command::Verify { suite } => {
                flags.suite = suite;
                ("verify", commands::cmd_verify)
            }
            Command::Ergodicity => ("ergodicity", commands::cmd_ergodicity),
        };
        let cfg = base.merge(flags);
        let format = Format::parse(cfg.format.as_deref())?;
        let outcome = run(&cfg)?;
        if let Some(dir) = &cfg.out {
            outcome.report.write(dir, format)?;
        }
        eprintln!("{name} finished in {:.3}s", started.elapsed().as_secs_f64());
        outcome
    };
    print!("{}", outcome.summary);
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
