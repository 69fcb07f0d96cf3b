//! `floqcool`: run cooling, transport and preparation experiments and write
//! plot-ready CSV tables with a JSON manifest.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::config::{ConfigFile, Engine, EngineChoice};
use crate::output::Output;

#[derive(Debug)]
pub enum CliError {
    /// The configuration does not match the schema.
    Schema {
        path: String,
        message: String,
    },
    Core(floqcool::Error),
    Io(String),
    /// A run finished but failed its own check.
    Check(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Schema { path, message } if path.is_empty() || path == "." => {
                write!(f, "configuration error: {message}")
            }
            CliError::Schema { path, message } => write!(f, "configuration error at `{path}`: {message}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<floqcool::Error> for CliError {
    fn from(e: floqcool::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema { .. } | CliError::Core(floqcool::Error::Config { .. }) => 2,
            CliError::Core(floqcool::Error::Capability(_) | floqcool::Error::Capacity { .. }) => 3,
            CliError::Check(_) => 4,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "floqcool",
    version,
    about = "Digital cooling and transport experiments on Floquet spin chains"
)]
struct Cli {
    /// TOML configuration file; absent sections use built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed of the run's random number generators.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Simulation engine; `auto` picks the dense engine for non-Gaussian experiments.
    #[arg(long, global = true, value_enum)]
    engine: Option<EngineChoice>,
    /// Number of sampled trajectories instead of exact channel averaging.
    #[arg(long, global = true)]
    trajectories: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Cooling curve: energy and local observables per cycle.
    Cool,
    /// Floquet quasiparticle modes of the open chain.
    Eigenmodes,
    /// Secular-theory occupations against the exact limit cycle.
    Secular,
    /// One-body density matrix analysis of the cooled state.
    Rdm,
    /// Boundary-driven XXZ transport.
    Xxz,
    /// Dissipative cooling against unitary preparation.
    ComparePrep,
    /// Single-qubit stabilization from random initial states.
    #[command(name = "stabilize-1q")]
    Stabilize1q,
    /// Parameter sweeps.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Cross-engine oracle on random matchgate circuits.
    Validate,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum SweepKind {
    /// Energy ratio over a (θ, h) grid.
    Cooling,
    /// Steady-state bond currents against the swap angle.
    Xxz,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Cool => "cool",
            Command::Eigenmodes => "eigenmodes",
            Command::Secular => "secular",
            Command::Rdm => "rdm",
            Command::Xxz => "xxz",
            Command::ComparePrep => "compare-prep",
            Command::Stabilize1q => "stabilize-1q",
            Command::Sweep {
                kind: SweepKind::Cooling,
            } => "sweep cooling",
            Command::Sweep { kind: SweepKind::Xxz } => "sweep xxz",
            Command::Validate => "validate",
        }
    }
}

/// Resolved run options shared by all subcommands.
pub struct Ctx {
    pub command: &'static str,
    pub file: ConfigFile,
    pub seed: Option<u64>,
    pub engine: EngineChoice,
    pub trajectories: Option<usize>,
    pub out: PathBuf,
}

/// Run in progress: output tables plus what goes into the manifest.
pub struct Run {
    pub out: Output,
    pub engine: Option<Engine>,
    pub config: serde_json::Value,
}

/// What a subcommand reports back.
pub struct Report {
    pub summary: serde_json::Value,
    /// Set when the run's own acceptance check failed.
    pub failure: Option<String>,
}

impl Ctx {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn no_trajectories(&self) -> Result<(), CliError> {
        match self.trajectories {
            Some(_) => Err(CliError::Core(floqcool::Error::Argument(format!(
                "`{}` has no trajectory mode",
                self.command
            )))),
            None => Ok(()),
        }
    }

    /// Open the output directory with a header holding the resolved section.
    pub fn start<T: Serialize>(&self, engine: Option<Engine>, section: &T) -> Result<Run, CliError> {
        let resolved = toml::to_string(section).map_err(|e| CliError::Io(e.to_string()))?;
        let mut header = format!(
            "floqcool {} {}\nseed = {}\nengine = {}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.seed(),
            engine.map_or("none", Engine::name)
        );
        if let Some(n) = self.trajectories {
            header.push_str(&format!("trajectories = {n}\n"));
        }
        header.push_str(&resolved);
        Ok(Run {
            out: Output::new(&self.out, header)?,
            engine,
            config: serde_json::to_value(section).map_err(|e| CliError::Io(e.to_string()))?,
        })
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    engine: Option<Engine>,
    seed: u64,
    trajectories: Option<usize>,
    config: &'a serde_json::Value,
    files: &'a [String],
    summary: &'a serde_json::Value,
    failure: Option<&'a str>,
    wall_time_s: f64,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let file = match &cli.config {
        Some(p) => config::load(p)?,
        None => ConfigFile::default(),
    };
    let ctx = Ctx {
        command: cli.command.name(),
        seed: cli.seed.or(file.seed),
        engine: cli.engine.or(file.engine).unwrap_or_default(),
        trajectories: cli.trajectories.or(file.trajectories),
        out: cli.out,
        file,
    };
    if ctx.trajectories == Some(0) {
        return Err(CliError::Schema {
            path: "trajectories".into(),
            message: "must be positive".into(),
        });
    }
    let (run, report) = match cli.command {
        Command::Cool => commands::cool(&ctx),
        Command::Eigenmodes => commands::eigenmodes(&ctx),
        Command::Secular => commands::secular(&ctx),
        Command::Rdm => commands::rdm(&ctx),
        Command::Xxz => commands::xxz(&ctx),
        Command::ComparePrep => commands::compare_prep(&ctx),
        Command::Stabilize1q => commands::stabilize(&ctx),
        Command::Sweep {
            kind: SweepKind::Cooling,
        } => commands::sweep_cooling(&ctx),
        Command::Sweep { kind: SweepKind::Xxz } => commands::sweep_xxz(&ctx),
        Command::Validate => commands::validate(&ctx),
    }?;
    run.out.manifest(&Manifest {
        command: ctx.command,
        version: env!("CARGO_PKG_VERSION"),
        engine: run.engine,
        seed: ctx.seed(),
        trajectories: ctx.trajectories,
        config: &run.config,
        files: run.out.files(),
        summary: &report.summary,
        failure: report.failure.as_deref(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })?;
    println!(
        "{}: wrote {} to {}",
        ctx.command,
        run.out.files().join(", "),
        ctx.out.display()
    );
    println!("{}", serde_json::to_string(&report.summary).unwrap_or_default());
    match report.failure {
        Some(m) => Err(CliError::Check(m)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
