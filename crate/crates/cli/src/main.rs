use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use spdc_cli::{configure_threads, load_config, presets, run, validate_file, CliError};

/// Two-crystal SPDC interference and state-function sweeps.
#[derive(Parser)]
#[command(name = "spdc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config file, a CSV whose header echoes one, or a shipped preset
    #[command(group(ArgGroup::new("source").required(true).args(["config", "preset"])))]
    Run {
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Directory for the CSV/SVG artifacts
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Report every problem in a config file
    Validate { config: PathBuf },
    /// Print the shipped preset names
    ListPresets,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cmd: Command) -> Result<ExitCode, CliError> {
    match cmd {
        Command::Run { config, preset, out } => {
            configure_threads()?;
            let cfg = match (config, preset) {
                (_, Some(name)) => presets::load(&name)?,
                (Some(path), None) => load_config(&path)?,
                (None, None) => unreachable!("clap enforces the source group"),
            };
            let report = run::run(&cfg, &out)?;
            let mut line = format!("{} -> {}", report.summary, report.csv_path.display());
            if let Some(svg) = &report.svg_path {
                line.push_str(&format!(", {}", svg.display()));
            }
            println!("{line}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config } => {
            let diags = validate_file(&config)?;
            if diags.is_empty() {
                println!("{}: ok", config.display());
                return Ok(ExitCode::SUCCESS);
            }
            for d in &diags {
                println!("{d}");
            }
            Ok(ExitCode::FAILURE)
        }
        Command::ListPresets => {
            for name in presets::names() {
                let cfg = presets::load(name)?;
                println!("{name:<20} {}", cfg.description.unwrap_or_default());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
