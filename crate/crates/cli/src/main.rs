mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::CliError;

/// Caps the worker pool when `LC_COHOM_THREADS` is set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("LC_COHOM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("LC_COHOM_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| commands::run(&cli.command));
    match outcome {
        Ok(report) => {
            match cli.format {
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&report.json).expect("json value serialises"))
                }
                Format::Text => print!("{}", report.text),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
