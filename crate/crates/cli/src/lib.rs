//! Batch front end for `willmore-core`. Each subcommand builds one report,
//! rendered as versioned JSON or as a CSV table.
//!
//! Exit status: 0 on success, 1 for a malformed configuration or unreadable
//! input, 2 when a numerical guard trips (degenerate immersion, curl defect,
//! non-finite values, inversion through the surface), 3 for `verify
//! --strict` with failing checks.

pub mod args;
pub mod commands;
pub mod input;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use willmore_core::Error;

pub use args::{Command, Format, RunConfig, Suite};
pub use report::Rendered;

#[derive(Clone, Debug, PartialEq)]
pub enum Failure {
    Config(String),
    Guard(Error),
    Io(String),
    ChecksFailed(usize),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Io(_) => 1,
            Failure::Guard(_) => 2,
            Failure::ChecksFailed(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(s) => write!(f, "configuration error: {s}"),
            Failure::Guard(e) => write!(f, "numerical guard tripped: {e}"),
            Failure::Io(s) => write!(f, "i/o error: {s}"),
            Failure::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Degenerate { .. }
            | Error::CurlDefect { .. }
            | Error::NonFinite(_)
            | Error::NonGenericInversion { .. }
            | Error::NotSimpleUnit(_) => Failure::Guard(e),
            other => Failure::Config(other.to_string()),
        }
    }
}

/// Runs one command and returns the rendered report.
pub fn execute(config: &RunConfig) -> Result<Rendered, Failure> {
    match &config.command {
        Command::Energy(s) => commands::energy(s),
        Command::Residues {
            surface,
            radius,
            potentials,
        } => commands::residues_at(surface, *radius, *potentials),
        Command::Sweep { surface, radii } => commands::sweep(surface, radii),
        Command::Verify { suite, .. } => suite::run_suite(*suite)?.render(),
        Command::Elastica(a) => commands::elastica(a),
        Command::Lorentz(a) => commands::lorentz(a),
        Command::Collar(a) => commands::collar(a),
    }
}

fn default_format(command: &Command) -> Format {
    match command {
        Command::Sweep { .. } => Format::Csv,
        _ => Format::Json,
    }
}

/// Executes `config` on a pool of the requested size and writes the report.
pub fn run(config: &RunConfig) -> Result<(), Failure> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be positive".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::Config(e.to_string()))?;
    let rendered = pool.install(|| execute(config))?;
    let text = rendered.text(config.format.unwrap_or_else(|| default_format(&config.command)))?;
    match &config.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(Failure::Io(e.to_string())),
                _ => {}
            }
        }
    }
    if let Command::Verify { strict: true, .. } = config.command {
        let failed = rendered.json["failed"].as_u64().unwrap_or(0) as usize;
        if failed > 0 {
            return Err(Failure::ChecksFailed(failed));
        }
    }
    Ok(())
}

/// Parses `args` and runs, mapping every outcome to an exit status.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("wrl: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
