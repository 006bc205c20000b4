//! `superint`: list, certify, simulate, sweep and tabulate the catalog.
//!
//! Exit codes: 0 pass, 1 certification failure, 2 configuration or
//! parameter error, 3 trajectory left its domain (truncated output kept).

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use config::{key_value, parse_point, Format, RunConfig};
use superint_core::Error;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

pub enum Outcome {
    Pass,
    Fail,
    DomainExit,
}

#[derive(Parser)]
#[command(name = "superint", version, about = "Superintegrable Hamiltonians and their certified constants of motion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog of systems with their parameters and integrals.
    List(Common),
    /// Check brackets, ranks, factorization identities and the κ → 0 limit.
    Certify(Common),
    /// Integrate a trajectory and track every integral.
    Simulate(Common),
    /// Deviation from the Euclidean integrals as κ → 0.
    Sweep(Common),
    /// Tabulate V = ½α²x²/(1 − κx²).
    Profile(Common),
    /// Closed-form Gaussian curvature against the finite-difference oracle.
    Curvature(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    system: Option<String>,
    /// Parameter override, repeatable: --param k2=0.5
    #[arg(long = "param", value_parser = key_value)]
    params: Vec<(String, String)>,
    /// Rational angular frequency p/q.
    #[arg(long)]
    m: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Point count (certify, sweep, curvature) or profile resolution.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Initial point q1,q2,p1,p2 in the chart given by --chart.
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    #[arg(long)]
    chart: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Tolerance override, repeatable: --tol bracket=1e-11
    #[arg(long = "tol", value_parser = key_value)]
    tol: Vec<(String, String)>,
    /// JSON file whose fields override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// midpoint or adaptive.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    sample_interval: Option<f64>,
    /// osc_conformal, osc_constant_curv or kepler_conformal; all when omitted.
    #[arg(long)]
    metric: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,
}

impl Common {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut tol = std::collections::BTreeMap::new();
        for (k, v) in self.tol {
            let v: f64 = v
                .parse()
                .map_err(|_| CliError::Config(format!("tolerance {k}={v} is not a number")))?;
            tol.insert(k, v);
        }
        let mut cfg = RunConfig {
            system: self.system,
            params: self
                .params
                .into_iter()
                .map(|(k, v)| (k, serde_json::Value::String(v)))
                .collect(),
            m: self.m,
            kappa: self.kappa,
            seed: self.seed,
            n: self.n,
            t_end: self.t_end,
            x0: self.x0.as_deref().map(parse_point).transpose().map_err(CliError::Config)?,
            chart: self.chart,
            out: self.out,
            format: self.format,
            tol,
            method: self.method,
            step: self.step,
            sample_interval: self.sample_interval,
            metric: self.metric,
            x_min: self.x_min,
            x_max: self.x_max,
        };
        if let Some(path) = &self.config {
            cfg.overlay_file(path)?;
        }
        Ok(cfg)
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SUPERINT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("SUPERINT_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    init_threads()?;
    match cli.command {
        Command::List(c) => commands::list(&c.into_config()?),
        Command::Certify(c) => commands::certify_cmd(&c.into_config()?),
        Command::Simulate(c) => commands::simulate(&c.into_config()?),
        Command::Sweep(c) => commands::sweep(&c.into_config()?),
        Command::Profile(c) => commands::profile(&c.into_config()?),
        Command::Curvature(c) => commands::curvature_table(&c.into_config()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Ok(Outcome::DomainExit) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
