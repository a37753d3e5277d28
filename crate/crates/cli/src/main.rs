//! `cocycle-lab`: verify identities, estimate exponents and export region
//! tables from the command line.
//!
//! Exit status: 0 when every checked identity passes, 1 when one fails,
//! 2 on invalid input.

mod commands;
mod config;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use cocycle_lab::Error;
use log::error;

use config::{Cli, RunConfig};

const THREADS_ENV: &str = "COCYCLE_LAB_THREADS";

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got `{raw}`"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// Numerical breakdowns mean the identity could not be confirmed; everything
/// else traces back to the inputs.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. } | Error::NonFiniteSample { .. } | Error::Overflow { .. } => {
            EXIT_FAIL
        }
        _ => EXIT_INPUT,
    }
}

fn emit(report: &report::Report, cfg: &RunConfig) -> io::Result<()> {
    match &cfg.out_path {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            report.write(cfg.format, &mut out)?;
            out.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            report.write(cfg.format, &mut out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    if let Err(msg) = init_threads() {
        error!("{msg}");
        return ExitCode::from(EXIT_INPUT);
    }
    let cfg = match RunConfig::resolve(cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            error!("{msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };

    let started = Instant::now();
    let mut report = match commands::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            error!("{e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    report.finish();
    report.wall_time_s = started.elapsed().as_secs_f64();

    if let Err(e) = emit(&report, &cfg) {
        error!("cannot write report: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
