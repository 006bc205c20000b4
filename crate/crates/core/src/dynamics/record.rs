//! Recorded trajectories, CSV/JSON output and drift statistics.

use std::fmt::Write as _;

use serde::Serialize;

use super::IntegratorConfig;
use crate::catalog::SystemDef;
use crate::error::Result;
use crate::observable::Observable;
use crate::types::{Chart, ParamSet};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// Truncated after `time` because the next state approached a singular set.
    DomainExit { time: f64 },
}

/// Sampled trajectory with the values of every tracked integral.
#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryRecord {
    pub system: String,
    pub params: ParamSet,
    pub chart: Chart,
    pub method: String,
    pub t_end: f64,
    pub integral_names: Vec<String>,
    pub times: Vec<f64>,
    pub points: Vec<[f64; 4]>,
    /// One row per time, one column per integral.
    pub integral_values: Vec<Vec<f64>>,
    pub status: RunStatus,
    /// Per integral: `max_t |J(t) − J(0)| / max(|J(0)|, 1)`.
    pub drift: Vec<f64>,
}

impl TrajectoryRecord {
    pub(super) fn new(sys: &SystemDef, cfg: &IntegratorConfig, t_end: f64, observables: &[Observable]) -> Self {
        TrajectoryRecord {
            system: sys.id.to_string(),
            params: sys.params,
            chart: sys.chart(),
            method: cfg.method.to_string(),
            t_end,
            integral_names: observables.iter().map(|o| o.name().to_string()).collect(),
            times: Vec::new(),
            points: Vec::new(),
            integral_values: Vec::new(),
            status: RunStatus::Completed,
            drift: Vec::new(),
        }
    }

    pub(super) fn push(&mut self, t: f64, z: &[f64; 4], observables: &[Observable]) -> Result<()> {
        let values = observables.iter().map(|o| o.eval_raw(z)).collect::<Result<Vec<_>>>()?;
        self.times.push(t);
        self.points.push(*z);
        self.integral_values.push(values);
        Ok(())
    }

    pub(super) fn finish(&mut self) {
        self.drift = (0..self.integral_names.len())
            .map(|j| relative_drift(self.integral_values.iter().map(|row| row[j])).0)
            .collect();
    }

    /// Value series of one tracked integral.
    pub fn series(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.integral_names.iter().position(|n| n == name)?;
        Some(self.integral_values.iter().map(|row| row[j]).collect())
    }

    /// `t, q1, q2, p1, p2, <integrals>` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,q1,q2,p1,p2");
        for n in &self.integral_names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for ((t, z), vals) in self.times.iter().zip(&self.points).zip(&self.integral_values) {
            let _ = write!(out, "{t:.16e}");
            for v in z.iter().chain(vals) {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }

    /// Run metadata with the drift table, without the sampled rows.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "system": self.system,
            "params": self.params,
            "chart": self.chart,
            "method": self.method,
            "t_end": self.t_end,
            "rows": self.times.len(),
            "status": self.status,
            "drift": drift_report(self, f64::INFINITY),
        })
    }
}

/// `(max, mean)` of `|J(t) − J(0)| / max(|J(0)|, 1)`.
fn relative_drift(series: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut first = None;
    let (mut max, mut sum, mut n) = (0.0f64, 0.0, 0usize);
    for v in series {
        let j0 = *first.get_or_insert(v);
        let d = (v - j0).abs() / j0.abs().max(1.0);
        max = max.max(d);
        sum += d;
        n += 1;
    }
    (max, if n == 0 { 0.0 } else { sum / n as f64 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftSummary {
    pub name: String,
    pub max_relative_drift: f64,
    pub mean_relative_drift: f64,
    pub exceeds_tolerance: bool,
}

/// Per-integral drift statistics, flagged against `tol`.
pub fn drift_report(traj: &TrajectoryRecord, tol: f64) -> Vec<DriftSummary> {
    traj.integral_names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let (max, mean) = relative_drift(traj.integral_values.iter().map(|row| row[j]));
            DriftSummary {
                name: name.clone(),
                max_relative_drift: max,
                mean_relative_drift: mean,
                exceeds_tolerance: max > tol,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(values: Vec<f64>) -> TrajectoryRecord {
        TrajectoryRecord {
            system: "test".into(),
            params: ParamSet::default(),
            chart: Chart::Cartesian,
            method: "none".into(),
            t_end: 1.0,
            integral_names: vec!["J".into()],
            times: (0..values.len()).map(|i| i as f64).collect(),
            points: vec![[0.0; 4]; values.len()],
            integral_values: values.into_iter().map(|v| vec![v]).collect(),
            status: RunStatus::Completed,
            drift: Vec::new(),
        }
    }

    #[test]
    fn constant_series_has_no_drift() {
        let r = drift_report(&synthetic(vec![2.5; 10]), 1e-12);
        assert_eq!(r[0].max_relative_drift, 0.0);
        assert!(!r[0].exceeds_tolerance);
    }

    #[test]
    fn sinusoidal_series_drift() {
        let j0 = 3.0;
        let vals: Vec<f64> = (0..2000).map(|i| j0 * (1.0 + 1e-9 * (i as f64 * 0.01).sin())).collect();
        let r = drift_report(&synthetic(vals), 1e-8);
        assert!((r[0].max_relative_drift - 1e-9).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let rec = synthetic(vec![1.0, 1.5]);
        let csv = rec.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,q1,q2,p1,p2,J");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("1.0000000000000000e0,"));
    }
}
