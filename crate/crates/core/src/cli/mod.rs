//! Command-line front end.
//!
//! `gapedge --config run.json` or `gapedge <command> [--p ..] [--m ..] ...`.
//! Exit codes: 0 success, 1 I/O failure, 2 malformed JSON, 3 unknown
//! command, 4 invalid configuration, 5 module error. `GAPEDGE_THREADS`
//! caps the worker threads.

mod config;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use serde_json::{json, Map, Value};
use thiserror::Error;

pub use config::{parse_config, parse_value, Command, Format, Params, RunConfig};
pub use run::{render, write_atomic};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("malformed JSON: {0}")]
    Malformed(String),
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    #[error("invalid configuration at {path}: {msg}")]
    Invalid { path: String, msg: String },
    #[error("{0}")]
    Module(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Malformed(_) => 2,
            CliError::UnknownCommand(_) => 3,
            CliError::Invalid { .. } => 4,
            CliError::Module(_) => 5,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gapedge",
    version,
    about = "Bound-state counting near the Dirac gap edges"
)]
struct Args {
    /// mathieu-rate | dipole-count | verify-rate | dirac-channel | dirac2d | charge-report
    command: Option<String>,
    /// JSON run configuration; shorthand flags override its parameters
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<f64>,
    /// Dipole strength |d|
    #[arg(long, allow_hyphen_values = true)]
    dipole: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Output file (standard output when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// json | csv
    #[arg(long)]
    format: Option<String>,
    /// Add wall-clock time to the report (breaks byte-identical output)
    #[arg(long)]
    timing: bool,
}

fn build_config(args: &Args) -> Result<RunConfig, CliError> {
    let mut root = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<Value>(&text).map_err(|e| CliError::Malformed(e.to_string()))?
        }
        None => json!({}),
    };
    let obj = root.as_object_mut().ok_or_else(|| CliError::Invalid {
        path: String::new(),
        msg: "configuration must be a JSON object".into(),
    })?;
    if let Some(c) = &args.command {
        obj.insert("command".into(), json!(c));
    }
    if !obj.contains_key("command") {
        return Err(CliError::Invalid {
            path: "command".into(),
            msg: "no command given".into(),
        });
    }
    let params = obj
        .entry("parameters")
        .or_insert_with(|| Value::Object(Map::new()));
    if let Value::Object(p) = params {
        let flags = [
            ("p", args.p),
            ("m", args.m),
            ("dipole", args.dipole),
            ("gamma", args.gamma),
            ("kappa", args.kappa),
            ("nu", args.nu),
            ("theta", args.theta),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                p.insert(k.into(), json!(v));
            }
        }
    }
    if let Some(out) = &args.out {
        obj.insert("output_path".into(), json!(out.to_string_lossy()));
    }
    if let Some(f) = &args.format {
        obj.insert("format".into(), json!(f));
    }
    parse_value(&root)
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("GAPEDGE_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::Invalid {
            path: "GAPEDGE_THREADS".into(),
            msg: format!("expected a positive integer, got {v:?}"),
        })?;
        if n == 0 {
            return Err(CliError::Invalid {
                path: "GAPEDGE_THREADS".into(),
                msg: "must be positive".into(),
            });
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Io(e.to_string()))
}

fn run_args(args: &Args) -> Result<(), CliError> {
    let cfg = build_config(args)?;
    let text = thread_pool()?.install(|| render(&cfg, args.timing))?;
    match &cfg.output_path {
        Some(path) => write_atomic(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
        }
    };
    match run_args(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("gapedge: {e}");
            e.exit_code()
        }
    }
}
