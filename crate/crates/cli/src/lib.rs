//! Command-line front end: analytic tables, criterion reports, trajectory
//! simulations and figure data, written as CSV plus JSON sidecars.

pub mod artifacts;
pub mod config;
mod figures;
mod modes;

use std::ffi::OsString;

use clap::Parser;

pub use artifacts::{read_table, Artifact, Table};
pub use config::{Args, Case, ExperimentConfig, Figure, Mode};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, config, or output location.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] eprwmr_core::Error),
}

impl CliError {
    /// 2 for validation errors, 3 for numeric-domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numeric() => 3,
            _ => 2,
        }
    }
}

/// Runs a resolved configuration and returns the artifacts written.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<Artifact>, CliError> {
    let work = || -> Result<Vec<Artifact>, CliError> {
        let dir = cfg.output_dir()?;
        let mut sink = artifacts::Sink::new(dir);
        match cfg.mode {
            Mode::Analytics => modes::analytics(cfg, &mut sink)?,
            Mode::Error => modes::error(cfg, &mut sink)?,
            Mode::Criterion => modes::criterion(cfg, &mut sink)?,
            Mode::Simulate => modes::simulate(cfg, &mut sink)?,
            Mode::Reproduce => figures::reproduce(cfg, &mut sink)?,
        }
        Ok(sink.written)
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Parses `args`, runs, prints one line per artifact and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = ExperimentConfig::resolve(args).and_then(|cfg| {
        if cfg.print_config {
            println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
        }
        run(&cfg)
    });
    match outcome {
        Ok(artifacts) => {
            for a in artifacts {
                println!("{}: {}", a.path.display(), a.summary);
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
