#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod parse;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use pil_core::report::{to_csv, to_text, Report};

use args::{Cli, Format};

/// Result of a subcommand: the report plus whether a hard check failed.
pub struct Outcome {
    pub report: Report,
    pub hard_failure: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &outcome.report) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if outcome.hard_failure {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), String> {
    let threads = match flag {
        Some(n) => Some(n),
        None => match std::env::var("PIL_THREADS") {
            Ok(s) => Some(s.trim().parse::<usize>().map_err(|_| format!("PIL_THREADS=`{s}` is not a count"))?),
            Err(_) => None,
        },
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err("thread count must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn format_of(cli: &Cli) -> Format {
    if let Some(f) = cli.format {
        return f;
    }
    if cli.json {
        return Format::Json;
    }
    match cli.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("csv") => Format::Csv,
        _ => Format::Text,
    }
}

fn emit(cli: &Cli, report: &Report) -> std::io::Result<()> {
    let text = match format_of(cli) {
        Format::Json => report.to_json(),
        Format::Csv => to_csv(&report.results),
        Format::Text => to_text(&report.results),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}
