//! Command-line front end for the readiness assessment toolkit.

pub mod commands;
pub mod config;
pub mod heatmap;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use dpc_core::{Error, Result};

use crate::config::{parse_settings, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

const SETTINGS_HELP: &str = "Settings: --config FILE, then any config field as a dotted flag, \
e.g. --seed 7 --trials 10 --out R --condition occlusion_like --assessment.tau_s 0.25 \
--recipe.mask_fraction 0.5. Flags override the file; DPC_SEED sets the default seed.";

#[derive(Parser, Debug)]
#[command(name = "dpc", about = "Stage readiness assessment and completion experiments", after_help = SETTINGS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Settings {
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "SETTINGS")]
    settings: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write one planted scenario as JSON.
    Generate(Settings),
    /// Readiness report for a scenario.
    Assess(Settings),
    /// Readiness report plus support-aware correction at the routed stage.
    Complete(Settings),
    /// Perturbation drop and completion recovery at selected, adjacent and random stages.
    Intervene(Settings),
    /// Post-completion utility under each stage-selection criterion.
    Criteria(Settings),
    /// Stage-wise cue maps, selection histogram and before/after correction values.
    Trajectory(Settings),
    /// Executable checks of the ordering and coverage propositions.
    Verify(Settings),
}

/// Run with `argv` (including the program name). Returns the exit status and
/// the written files.
pub fn run(argv: &[String]) -> (i32, Vec<PathBuf>) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return (code, Vec::new());
        }
    };
    match dispatch(cli.command) {
        Ok(paths) => (EXIT_OK, paths),
        Err(e) => {
            eprintln!("error: {e}");
            let code = if matches!(e, Error::Config(_)) { EXIT_CONFIG } else { EXIT_RUNTIME };
            (code, Vec::new())
        }
    }
}

fn dispatch(cmd: Command) -> Result<Vec<PathBuf>> {
    let (settings, body): (&Settings, fn(&RunConfig) -> Result<Vec<PathBuf>>) = match &cmd {
        Command::Generate(s) => (s, commands::generate),
        Command::Assess(s) => (s, commands::assess_cmd),
        Command::Complete(s) => (s, commands::complete_cmd),
        Command::Intervene(s) => (s, commands::intervene),
        Command::Criteria(s) => (s, commands::criteria),
        Command::Trajectory(s) => (s, commands::trajectory),
        Command::Verify(s) => (s, commands::verify),
    };
    let (file, overrides) = parse_settings(&settings.settings)?;
    let env_seed = std::env::var("DPC_SEED").ok();
    let cfg = RunConfig::resolve(file.as_deref(), env_seed.as_deref(), &overrides)?;
    body(&cfg)
}
