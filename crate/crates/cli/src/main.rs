//! `ncqm` — batch experiment runner.
//!
//! Subcommands pick the experiment; a JSON config (strict schema) supplies
//! parameters, dotted `--set key=value` flags override individual fields,
//! and an optional `sweep` section fans out a cartesian parameter grid
//! (`--jobs k` runs points concurrently). Each run writes
//! `summary.json` (canonical formatting: sorted keys, 17-significant-digit
//! floats, so identical configs and seeds produce byte-identical output)
//! plus data CSVs into its own timestamped directory.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical failure,
//! 4 I/O error.

mod config;
mod experiments;
mod output;

use std::collections::VecDeque;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand};
use ncqm_core::error::NcqmError;
use ncqm_core::jsonfmt;
use serde_json::Value;

use config::{expand_sweep, parse_config, set_dotted, Experiment};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn from_core(e: NcqmError) -> Self {
        match e {
            NcqmError::InvalidArgument(_)
            | NcqmError::UnsupportedBoundary { .. }
            | NcqmError::ShapeMismatch { .. }
            | NcqmError::NonFinite(_) => CliError::Validation(e.to_string()),
            NcqmError::NotHermitian { .. }
            | NcqmError::NonConvergence { .. }
            | NcqmError::Lapack { .. } => CliError::Numerical(e.to_string()),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "ncqm", about = "Noncommutative quantum mechanics experiment runner")]
struct Cli {
    #[command(subcommand)]
    experiment: ExperimentCmd,
}

#[derive(Subcommand, Clone)]
enum ExperimentCmd {
    /// Verify the exotic Galilei commutator table on random states
    AlgebraCheck(CommonArgs),
    /// Moyal star product of two polynomials
    Star(CommonArgs),
    /// Eigenvalues of the Bopp-shifted Hamiltonian on a periodic grid
    Spectrum(CommonArgs),
    /// Linear potential in a Dirichlet box: gauge shift and Airy profile
    Linear(CommonArgs),
    /// Crank-Nicolson time evolution of a Gaussian packet
    Evolve(CommonArgs),
    /// Evolution plus Ehrenfest-relation residuals
    Ehrenfest(CommonArgs),
    /// First-order anharmonic energy shift vs the transcribed closed form
    Perturb(CommonArgs),
    /// Hermite integral identities vs the quadrature oracle
    Errata(CommonArgs),
}

#[derive(Parser, Clone)]
struct CommonArgs {
    /// JSON config file (defaults apply when omitted)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dotted-path override, e.g. --set grid.nx=128 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory (falls back to config.outdir, $NCQM_OUTDIR, ./runs)
    #[arg(long)]
    outdir: Option<PathBuf>,
    /// Concurrent sweep points
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Seed for randomized test states
    #[arg(long)]
    seed: Option<u64>,
}

impl ExperimentCmd {
    fn split(&self) -> (Experiment, &CommonArgs) {
        match self {
            ExperimentCmd::AlgebraCheck(a) => (Experiment::AlgebraCheck, a),
            ExperimentCmd::Star(a) => (Experiment::Star, a),
            ExperimentCmd::Spectrum(a) => (Experiment::Spectrum, a),
            ExperimentCmd::Linear(a) => (Experiment::Linear, a),
            ExperimentCmd::Evolve(a) => (Experiment::Evolve, a),
            ExperimentCmd::Ehrenfest(a) => (Experiment::Ehrenfest, a),
            ExperimentCmd::Perturb(a) => (Experiment::Perturb, a),
            ExperimentCmd::Errata(a) => (Experiment::Errata, a),
        }
    }
}

fn load_config_value(args: &CommonArgs) -> Result<Value, CliError> {
    let mut value = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?
        }
        None => Value::Object(Default::default()),
    };
    for kv in &args.set {
        let (key, raw) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("--set needs KEY=VALUE, got {kv}")))?;
        set_dotted(&mut value, key, raw)?;
    }
    if let Some(seed) = args.seed {
        set_dotted(&mut value, "seed", &seed.to_string())?;
    }
    Ok(value)
}

fn resolve_outdir(args: &CommonArgs, cfg_outdir: Option<&str>) -> PathBuf {
    if let Some(dir) = &args.outdir {
        return dir.clone();
    }
    if let Some(dir) = cfg_outdir {
        return PathBuf::from(dir);
    }
    if let Ok(dir) = std::env::var("NCQM_OUTDIR") {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from("runs")
}

/// Run one resolved config point; returns the run directory.
fn run_point(
    exp: Experiment,
    point_value: &Value,
    outdir: &std::path::Path,
    point: Option<usize>,
) -> Result<PathBuf, CliError> {
    let cfg = parse_config(point_value.clone())?;
    let out = experiments::run_experiment(exp, &cfg)?;
    // resolved config is embedded so the summary re-validates on re-read
    let mut summary = out.summary;
    let mut resolved = serde_json::to_value(&cfg)
        .map_err(|e| CliError::Validation(format!("config re-serialization: {e}")))?;
    resolved
        .as_object_mut()
        .expect("config is an object")
        .insert("experiment".into(), Value::String(exp.name().into()));
    summary["config"] = resolved;

    let dir = output::create_run_dir(outdir, exp.name(), point)?;
    let write_all = || -> Result<(), CliError> {
        output::write_atomic(&dir, "summary.json", &jsonfmt::to_canonical_pretty(&summary))?;
        for (name, contents) in &out.files {
            output::write_atomic(&dir, name, contents)?;
        }
        Ok(())
    };
    match write_all() {
        Ok(()) => Ok(dir),
        Err(e) => {
            output::cleanup_dir(&dir);
            Err(e)
        }
    }
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    let (exp, args) = cli.experiment.split();
    let value = load_config_value(args)?;
    // validate the base config (including sweep syntax) before expansion
    let base_cfg = parse_config(value.clone())?;
    let outdir = resolve_outdir(args, base_cfg.outdir.as_deref());
    let points = expand_sweep(value)?;

    if points.len() == 1 {
        let dir = run_point(exp, &points[0], &outdir, None)?;
        println!("ncqm {}: wrote {}", exp.name(), dir.join("summary.json").display());
        return Ok(());
    }

    let jobs = args.jobs.max(1);
    let queue: Mutex<VecDeque<(usize, Value)>> =
        Mutex::new(points.into_iter().enumerate().collect());
    let failures: Mutex<Vec<(usize, CliError)>> = Mutex::new(Vec::new());
    let done: Mutex<Vec<(usize, PathBuf)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let next = queue.lock().expect("queue lock").pop_front();
                let Some((idx, point)) = next else { break };
                match run_point(exp, &point, &outdir, Some(idx)) {
                    Ok(dir) => done.lock().expect("done lock").push((idx, dir)),
                    Err(e) => failures.lock().expect("failures lock").push((idx, e)),
                }
            });
        }
    });
    let mut done = done.into_inner().expect("done lock");
    done.sort_by_key(|(i, _)| *i);
    for (idx, dir) in &done {
        println!("ncqm {} point {idx}: wrote {}", exp.name(), dir.join("summary.json").display());
    }
    let failures = failures.into_inner().expect("failures lock");
    if let Some((idx, err)) = failures.into_iter().next() {
        return Err(match err {
            CliError::Validation(m) => CliError::Validation(format!("point {idx}: {m}")),
            CliError::Numerical(m) => CliError::Numerical(format!("point {idx}: {m}")),
            CliError::Io(m) => CliError::Io(format!("point {idx}: {m}")),
        });
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ncqm: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
