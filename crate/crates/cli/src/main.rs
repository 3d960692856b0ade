//! `fracwave`: simulate detector data for the fractional wave equation,
//! reconstruct the initial function, and run the self-test suites.

mod config;
mod error;
mod run;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind as ClapKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use fracwave::selftest::Faults;

use config::{CutoffSpec, ExperimentConfig, Overrides};
use error::{CliError, CliResult};
use run::Ctx;

#[derive(Parser)]
#[command(name = "fracwave", version, about = "Fractional wave equation: forward data and Mellin-transform inversion")]
struct Cli {
    /// Suppress progress messages and the printed report.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate detector data for the configured phantom.
    Simulate(RunArgs),
    /// Reconstruct the initial function from a detector data file.
    Reconstruct {
        #[command(flatten)]
        run: RunArgs,
        /// Detector data CSV; defaults to data.csv in the output directory.
        #[arg(long, value_name = "PATH")]
        data: Option<PathBuf>,
    },
    /// Simulate, then reconstruct and score against the phantom.
    Roundtrip(RunArgs),
    /// Run the invariant suites (all of them when none is named).
    Selftest {
        /// Print the suite names and exit.
        #[arg(long)]
        list: bool,
        suites: Vec<String>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration (TOML).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory; overrides experiment.output.
    #[arg(long, value_name = "DIR")]
    out: Option<String>,
    /// Exclude flagged samples instead of bridging them.
    #[arg(long)]
    strict: bool,
    /// Window cutoff: a number, `auto` or `off`.
    #[arg(long, value_name = "FLOAT")]
    cutoff: Option<CutoffSpec>,
    /// Real part of the Mellin inversion line.
    #[arg(long, value_name = "FLOAT")]
    gamma: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    MultiplierSignFlip,
}

impl RunArgs {
    fn load(&self) -> CliResult<ExperimentConfig> {
        let path = self.config.display().to_string();
        let text = fs::read_to_string(&self.config).map_err(CliError::io(&self.config))?;
        let over = Overrides {
            output: self.out.clone(),
            strict: self.strict,
            cutoff: self.cutoff,
            gamma: self.gamma,
        };
        ExperimentConfig::load(&path, &text, &over)
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    let ctx = Ctx { quiet: cli.quiet };
    match cli.command {
        Command::Simulate(a) => {
            run::simulate(&a.load()?, &ctx)?;
        }
        Command::Reconstruct { run: a, data } => {
            let cfg = a.load()?;
            let data = data.unwrap_or_else(|| run::output_dir(&cfg).join("data.csv"));
            run::reconstruct(&cfg, &data, &ctx)?;
        }
        Command::Roundtrip(a) => {
            run::roundtrip(&a.load()?, &ctx)?;
        }
        Command::Selftest {
            list,
            suites,
            inject_fault,
        } => {
            if list {
                print!("{}", run::list_suites());
                return Ok(());
            }
            let faults = Faults {
                multiplier_sign_flip: matches!(inject_fault, Some(Fault::MultiplierSignFlip)),
            };
            run::run_selftest(&suites, &faults, &ctx)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ClapKind::DisplayHelp | ClapKind::DisplayVersion | ClapKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
