//! Flag parsing support and the JSON config file that overrides flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use superint_core::{Chart, ParamSet, PhasePoint};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Every setting a command may read. Flags fill it first; a config file,
/// when given, overrides whatever fields it sets.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    pub m: Option<String>,
    pub kappa: Option<f64>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub t_end: Option<f64>,
    pub x0: Option<Vec<f64>>,
    pub chart: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    #[serde(default)]
    pub tol: BTreeMap<String, f64>,
    pub method: Option<String>,
    pub step: Option<f64>,
    pub sample_interval: Option<f64>,
    pub metric: Option<String>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
}

/// Split `key=value`.
pub fn key_value(s: &str) -> Result<(String, String), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(format!("empty key in `{s}`"));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

impl RunConfig {
    pub fn overlay_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let file: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))?;
        macro_rules! take {
            ($($f:ident),*) => { $( if file.$f.is_some() { self.$f = file.$f; } )* };
        }
        take!(system, m, kappa, seed, n, t_end, x0, chart, out, format, method, step, sample_interval, metric, x_min, x_max);
        self.params.extend(file.params);
        self.tol.extend(file.tol);
        Ok(())
    }

    pub fn system(&self) -> Result<&str, CliError> {
        self.system
            .as_deref()
            .ok_or_else(|| CliError::Config("--system is required".into()))
    }

    /// Defaults, then `--param` pairs, then the dedicated `--m` and `--kappa`.
    pub fn params(&self) -> Result<ParamSet, CliError> {
        let mut p = ParamSet::default();
        for (k, v) in &self.params {
            let text = match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            p.set(k, &text)?;
        }
        if let Some(m) = &self.m {
            p.set("m", m)?;
        }
        if let Some(k) = self.kappa {
            p.kappa = k;
        }
        p.validate()?;
        Ok(p)
    }

    pub fn tol(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.tol.get(key) {
            None => Ok(default),
            Some(v) if v.is_finite() && *v > 0.0 => Ok(*v),
            Some(v) => Err(CliError::Config(format!("tolerance {key} must be positive, got {v}"))),
        }
    }

    /// Reject `--tol` keys a command does not understand.
    pub fn check_tol_keys(&self, known: &[&str]) -> Result<(), CliError> {
        match self.tol.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(CliError::Config(format!(
                "unknown tolerance `{k}` (expected one of: {})",
                known.join(", ")
            ))),
            None => Ok(()),
        }
    }

    pub fn chart(&self) -> Result<Chart, CliError> {
        Ok(self.chart.as_deref().unwrap_or("cartesian").parse::<Chart>()?)
    }

    pub fn x0(&self) -> Result<PhasePoint, CliError> {
        let z = self
            .x0
            .as_ref()
            .ok_or_else(|| CliError::Config("--x0 q1,q2,p1,p2 is required".into()))?;
        let z: [f64; 4] = z
            .as_slice()
            .try_into()
            .map_err(|_| CliError::Config(format!("--x0 needs 4 components, got {}", z.len())))?;
        Ok(PhasePoint::from_array(self.chart()?, z)?)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

/// `1.5,0,0,0.7` → components.
pub fn parse_point(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|_| format!("bad number `{c}` in `{s}`")))
        .collect()
}
