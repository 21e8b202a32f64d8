//! Config-driven sweeps over the spdc-core models, with the shipped figure
//! presets and CSV/SVG emission.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub mod config;
pub mod presets;
pub mod run;
pub mod svg;
pub mod units;

pub use config::{Diagnostic, RunConfig};

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "SPDC_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", list(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("unknown preset {0:?} (see `spdc list-presets`)")]
    UnknownPreset(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{THREADS_ENV}: {0}")]
    Threads(String),
    #[error(transparent)]
    Core(#[from] spdc_core::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Core(e.into())
    }
}

fn list(d: &[Diagnostic]) -> String {
    let mut s = format!("{} invalid setting(s)", d.len());
    for x in d {
        let _ = write!(s, "\n  {x}");
    }
    s
}

/// Reads a TOML config, or the config echoed in the header of an earlier CSV.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Read {
        path: path.to_path_buf(),
        source: e,
    })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let text = if is_csv {
        RunConfig::extract_from_csv(&text)
    } else {
        text
    };
    RunConfig::from_toml_str(&text, stem).map_err(CliError::Invalid)
}

/// All diagnostics for a config file; empty means runnable.
pub fn validate_file(path: &Path) -> Result<Vec<Diagnostic>, CliError> {
    match load_config(path) {
        Ok(_) => Ok(Vec::new()),
        Err(CliError::Invalid(d)) => Ok(d),
        Err(e) => Err(e),
    }
}

/// Sizes the global rayon pool from `SPDC_THREADS`, if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Threads(format!("expected a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Threads(e.to_string()))
}
