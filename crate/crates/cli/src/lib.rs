//! Experiment driver: turns an [`ExperimentConfig`] into CSV tables and a
//! JSON manifest.

pub mod commands;
pub mod config;
pub mod table;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use config::{Command, ExperimentConfig};
pub use table::Table;

/// Exit code for malformed or out-of-range configurations.
pub const EXIT_INVALID_CONFIG: i32 = 2;
/// Exit code for requests beyond a solver's resource budget.
pub const EXIT_BUDGET: i32 = 3;
/// Exit code for runs that produced too little data to analyse.
pub const EXIT_NUMERICAL: i32 = 4;
pub const EXIT_IO: i32 = 5;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const CONFIG_FILE: &str = "config.json";

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_INVALID_CONFIG,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<qdlab::Error> for CliError {
    fn from(e: qdlab::Error) -> Self {
        match e {
            qdlab::Error::InvalidParameter(_) | qdlab::Error::DimensionMismatch { .. } => {
                CliError::Config(e.to_string())
            }
            qdlab::Error::Budget { .. } => CliError::Budget(e.to_string()),
            qdlab::Error::InsufficientData(_) => CliError::Numerical(e.to_string()),
        }
    }
}

/// Result tables plus a few human-readable lines for the terminal.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub summary: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub program: String,
    pub version: String,
    pub subcommand: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub threads: usize,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub outcome: Outcome,
    pub manifest: Manifest,
    pub files: Vec<PathBuf>,
}

/// Computes the tables without touching the file system.
pub fn execute(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    commands::dispatch(&config.command, config.seed)
}

/// Computes the tables and writes them, the config and the manifest to
/// `config.output`.
pub fn run(config: &ExperimentConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let outcome = execute(config)?;
    let dir = &config.output;
    std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let mut files = Vec::new();
    for t in &outcome.tables {
        let path = dir.join(t.file_name());
        std::fs::write(&path, t.to_csv()?).map_err(|e| io_error(&path, e))?;
        files.push(path);
    }
    let config_path = dir.join(CONFIG_FILE);
    std::fs::write(&config_path, config.to_json() + "\n").map_err(|e| io_error(&config_path, e))?;
    let manifest = Manifest {
        program: "qdlab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        subcommand: config.command.name().into(),
        seed: config.seed,
        config: config.clone(),
        threads: rayon::current_num_threads(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        outputs: outcome.tables.iter().map(Table::file_name).collect(),
    };
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    std::fs::write(&manifest_path, text).map_err(|e| io_error(&manifest_path, e))?;
    files.push(config_path);
    files.push(manifest_path);
    Ok(RunReport {
        outcome,
        manifest,
        files,
    })
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Pool size: `QDLAB_THREADS` if set, else the flag, else all logical cores (0).
pub fn thread_count(flag: Option<usize>, env: Option<&str>) -> Result<usize, CliError> {
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("QDLAB_THREADS must be a non-negative integer, got '{v}'"))),
        None => Ok(flag.unwrap_or(0)),
    }
}
