//! `interlock`: trial analysis, crescent calculations, design search and
//! forward simulation for articulated interlocking spikes.
//!
//! Exit status: 0 success, 2 parse or validation error, 3 domain error,
//! 4 I/O error.

mod commands;
mod config;
mod error;
mod files;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use interlock_core::ForceLaw;

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "interlock",
    version,
    about = "Interlocking spike traction analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a trial log to a JSON report and plot-ready series.
    Analyze(AnalyzeArgs),
    /// Scan shear-plane angles for the critical crescent wedge.
    Crescent(CrescentArgs),
    /// Rank the feasible designs of a design space.
    Design(DesignArgs),
    /// Predict a trial series for a design under a draft schedule.
    Simulate(SimulateArgs),
}

#[derive(clap::Args)]
pub struct AnalyzeArgs {
    /// Trial log (CSV with a metadata line).
    #[arg(long)]
    pub log: PathBuf,
    /// Report destination (JSON).
    #[arg(long)]
    pub out: PathBuf,
    /// Directory for per-figure CSV series.
    #[arg(long)]
    pub series: Option<PathBuf>,
    /// Blade push distance for tractive efficiency, m.
    #[arg(long, default_value_t = 2.0)]
    pub push_distance: f64,
    /// Depth jump per step that marks a landslide, m.
    #[arg(long, default_value_t = 0.01)]
    pub depth_threshold: f64,
    /// Hinge motion jump per step that marks a landslide, m.
    #[arg(long, default_value_t = 0.01)]
    pub motion_threshold: f64,
    /// Step number from which the vehicle was seen lifted off. Without it the
    /// vehicle is taken to have stayed grounded.
    #[arg(long)]
    pub liftoff_step: Option<u64>,
}

#[derive(clap::Args)]
pub struct CrescentArgs {
    /// Tip depth, m.
    #[arg(long)]
    pub depth: f64,
    /// Spike width, m.
    #[arg(long)]
    pub width: f64,
    /// Soil file, or preset:dry / preset:moist.
    #[arg(long)]
    pub soil: String,
    #[arg(long, default_value = "active", value_parser = parse_law)]
    pub law: ForceLaw,
    #[arg(long)]
    pub beta_min: Option<f64>,
    #[arg(long)]
    pub beta_max: Option<f64>,
    #[arg(long)]
    pub beta_step: Option<f64>,
    /// Destination for the force-vs-angle curve (CSV).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_law(s: &str) -> Result<ForceLaw, String> {
    s.parse()
}

#[derive(Clone, Copy, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(clap::Args)]
pub struct DesignArgs {
    /// Design space file (TOML).
    #[arg(long)]
    pub space: PathBuf,
    /// Constraints file (TOML).
    #[arg(long)]
    pub constraints: PathBuf,
    /// Soil file, or preset:dry / preset:moist.
    #[arg(long, default_value = "preset:dry")]
    pub soil: String,
    /// Keep only the best N designs.
    #[arg(long)]
    pub top: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Destination; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct SimulateArgs {
    /// Spike design file (TOML).
    #[arg(long)]
    pub design: PathBuf,
    /// Soil file, or preset:dry / preset:moist.
    #[arg(long)]
    pub soil: String,
    /// Draft schedule (CSV: step,draft_N).
    #[arg(long)]
    pub draft_schedule: PathBuf,
    /// Destination for the predicted series; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the trial log an ideal instrument would have recorded.
    #[arg(long)]
    pub log_out: Option<PathBuf>,
    /// Draft per meter of tip depth, N/m.
    #[arg(long)]
    pub stiffness: Option<f64>,
    /// Tip depth gained per meter of forward tip travel.
    #[arg(long)]
    pub trajectory_slope: Option<f64>,
    /// Vehicle mass recorded in the simulated log, kg.
    #[arg(long, default_value_t = 50.0)]
    pub vehicle_kg: f64,
}

fn run(cli: Cli) -> Result<Option<String>, CliError> {
    match cli.command {
        Command::Analyze(a) => commands::run_analyze(&a).map(|_| None),
        Command::Crescent(a) => commands::run_crescent(&a).map(Some),
        Command::Design(a) => {
            let (body, summary) = commands::run_design(&a)?;
            eprintln!("{summary}");
            Ok(body)
        }
        Command::Simulate(a) => commands::run_simulate(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(stdout) => {
            if let Some(text) = stdout {
                let mut lock = std::io::stdout().lock();
                if lock.write_all(text.as_bytes()).is_err() {
                    return ExitCode::from(4);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
