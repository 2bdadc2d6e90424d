use std::path::PathBuf;
use std::process::ExitCode;

use arealab::catalog::{describe, list_experiments};
use arealab::{configure_threads, run, CliError, ExperimentConfig, ExperimentKind};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "arealab", version, about = "Entanglement area-law experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run { config: PathBuf },
    /// List the experiment kinds.
    List,
    /// Show the parameter schema and the claim an experiment checks.
    Describe { kind: String },
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn real_main(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::List => {
            print!("{}", list_experiments());
            Ok(ExitCode::SUCCESS)
        }
        Command::Describe { kind } => {
            let kind: ExperimentKind = kind.parse()?;
            print!("{}", describe(kind));
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { config } => {
            configure_threads()?;
            let cfg = ExperimentConfig::from_json(&std::fs::read_to_string(&config)?)?;
            let out = run(&cfg)?;
            for v in &out.report.verdicts {
                println!(
                    "{} {} value={} tolerance: {}",
                    if v.pass { "PASS" } else { "FAIL" },
                    v.id,
                    arealab::report::fmt12(v.value),
                    v.tolerance
                );
            }
            if let Some(e) = &out.report.error {
                eprintln!("error during run: {e}");
            }
            println!("wrote {} and {}", out.csv_path.display(), out.report_path.display());
            if out.report.error.is_some() {
                Ok(ExitCode::from(1))
            } else if out.report.all_pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
    }
}
