use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tubeswarm::commands::{cmd_compare, cmd_plan, cmd_simulate, cmd_validate};
use tubeswarm::{load_scenario, Error, Mode, ScenarioConfig};

#[derive(Parser)]
#[command(name = "tubeswarm", version, about = "Plan and simulate swarms passing through virtual tubes")]
struct Cli {
    /// Output directory (overridden by TUBESWARM_OUT).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Seed for the initial formation and the planner probe.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Simulation time step in seconds.
    #[arg(long, global = true)]
    dt: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    With,
    Without,
}

#[derive(Subcommand)]
enum Command {
    /// Plan speed and density along the tube.
    Plan { scenario: String },
    /// Run one closed-loop simulation.
    Simulate {
        scenario: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Plan file to track; planned on the fly when absent.
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Plan, then simulate with and without planning.
    Compare { scenario: String },
    /// Check a plan file against a scenario. Exits 1 if infeasible.
    Validate { plan: PathBuf, scenario: String },
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    message: String,
}

fn scenario(cli: &Cli, name: &str) -> Result<ScenarioConfig, Error> {
    let mut s = load_scenario(name)?;
    if let Some(seed) = cli.seed {
        s = s.with_seed(seed);
    }
    if let Some(dt) = cli.dt {
        s.sim.dt = dt;
    }
    s.validate()?;
    Ok(s)
}

fn print_json<T: Serialize>(v: &T) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: &Cli, out: &Path) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Plan { scenario: name } => {
            let outcome = cmd_plan(&scenario(cli, name)?, out)?;
            print_json(&outcome.report)?;
        }
        Command::Simulate { scenario: name, mode, plan } => {
            let mode = match mode {
                ModeArg::With => Mode::WithPlanning,
                ModeArg::Without => Mode::WithoutPlanning,
            };
            let summary = cmd_simulate(&scenario(cli, name)?, mode, plan.as_deref(), out)?;
            print_json(&summary)?;
        }
        Command::Compare { scenario: name } => {
            let summary = cmd_compare(&scenario(cli, name)?, out)?;
            print_json(&summary.headline)?;
        }
        Command::Validate { plan, scenario: name } => {
            let report = cmd_validate(plan, &scenario(cli, name)?)?;
            print_json(&report)?;
            if !report.feasible {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = std::env::var_os("TUBESWARM_OUT").map(PathBuf::from).unwrap_or_else(|| cli.out.clone());
    match run(&cli, &out) {
        Ok(code) => code,
        Err(e) => {
            let body = ErrorBody {
                error: e.kind(),
                message: e.to_string(),
            };
            eprintln!("{}", serde_json::to_string(&body).unwrap_or_else(|_| e.to_string()));
            ExitCode::from(2)
        }
    }
}
