//! Metrics associated with the curved oscillator and Kepler systems, their
//! closed-form curvatures, and an independent finite-difference oracle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{Constraint, Domain, SampleBox};
use crate::error::{domain, Error, Result};
use crate::types::PhasePoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricId {
    /// `(1 − κr²)(dx² + dy²)`
    OscConformal,
    /// `[(1 − κy²)dx² + 2κxy dx dy + (1 − κx²)dy²] / (1 − κr²)`
    OscConstantCurv,
    /// `(1 − κ/r)(dx² + dy²)`
    KeplerConformal,
}

impl MetricId {
    pub const ALL: [MetricId; 3] = [
        MetricId::OscConformal,
        MetricId::OscConstantCurv,
        MetricId::KeplerConformal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::OscConformal => "osc_conformal",
            MetricId::OscConstantCurv => "osc_constant_curv",
            MetricId::KeplerConformal => "kepler_conformal",
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MetricId::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown metric `{s}`")))
    }
}

/// Metric components `(g11, g12, g22)`.
pub type Components = [f64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricDef {
    pub id: MetricId,
    pub kappa: f64,
}

/// Default finite-difference step of the curvature oracle.
pub const ORACLE_STEP: f64 = 1e-4;

impl MetricDef {
    pub fn new(id: MetricId, kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::InvalidParams(format!("kappa = {kappa} is not finite")));
        }
        Ok(MetricDef { id, kappa })
    }

    /// Components at `(x, y)`; errors where the metric is not positive definite.
    pub fn components(&self, x: f64, y: f64) -> Result<Components> {
        let k = self.kappa;
        let r2 = x * x + y * y;
        let g = match self.id {
            MetricId::OscConformal => {
                let w = 1.0 - k * r2;
                [w, 0.0, w]
            }
            MetricId::OscConstantCurv => {
                let w = 1.0 - k * r2;
                if w <= 0.0 {
                    return Err(domain(format!("1 - kappa r^2 = {w} must be positive")));
                }
                [(1.0 - k * y * y) / w, k * x * y / w, (1.0 - k * x * x) / w]
            }
            MetricId::KeplerConformal => {
                let r = r2.sqrt();
                if r == 0.0 {
                    return Err(domain("kepler metric is singular at the origin"));
                }
                let w = 1.0 - k / r;
                [w, 0.0, w]
            }
        };
        let det = g[0] * g[2] - g[1] * g[1];
        if !(g[0] > 0.0 && det > 0.0) {
            return Err(domain(format!(
                "{} is not positive definite at ({x}, {y})",
                self.id
            )));
        }
        Ok(g)
    }

    /// Closed-form `(R1212, K)` with `K = R1212 / det g`.
    pub fn curvature(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let g = self.components(x, y)?;
        let det = g[0] * g[2] - g[1] * g[1];
        let k = self.kappa;
        let r2 = x * x + y * y;
        let r1212 = match self.id {
            MetricId::OscConformal => 2.0 * k / (1.0 - k * r2),
            MetricId::OscConstantCurv => k / (1.0 - k * r2),
            MetricId::KeplerConformal => {
                let r = r2.sqrt();
                k / (2.0 * r2 * (r - k))
            }
        };
        Ok((r1212, r1212 / det))
    }

    /// Region where the metric is sampled, with the usual margin.
    pub fn domain(&self) -> Domain {
        let k = self.kappa;
        match self.id {
            MetricId::OscConformal | MetricId::OscConstantCurv => {
                let half = if k > 0.0 { f64::min(2.0, 1.0 / k.sqrt()) } else { 2.0 };
                Domain::new(
                    vec![Constraint::DiskInterior { kappa: k }],
                    SampleBox::cartesian(half, 0.0),
                )
            }
            MetricId::KeplerConformal => {
                let half = if k > 0.0 { k + 2.0 } else { 2.0 };
                Domain::new(
                    vec![Constraint::AwayFromOrigin, Constraint::OutsideShift { kappa: k }],
                    SampleBox::cartesian(half, 0.0),
                )
            }
        }
    }

    pub fn sample(&self, seed: u64, n: usize) -> Result<Vec<(f64, f64)>> {
        Ok(self
            .domain()
            .sample(seed, n)?
            .iter()
            .map(|p: &PhasePoint| (p.q1(), p.q2()))
            .collect())
    }
}

/// Closed-form curvature of `metric` at `(x, y)`.
pub fn curvature(metric: &MetricDef, x: f64, y: f64) -> Result<(f64, f64)> {
    metric.curvature(x, y)
}

/// Gaussian curvature from the Brioschi formula with central differences of
/// step `h`, Richardson-extrapolated against step `h/2`.
pub fn curvature_oracle(metric: &MetricDef, x: f64, y: f64, h: f64) -> Result<f64> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Config(format!("oracle step must be positive, got {h}")));
    }
    let coarse = brioschi(metric, x, y, h)?;
    let fine = brioschi(metric, x, y, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn brioschi(metric: &MetricDef, x: f64, y: f64, h: f64) -> Result<f64> {
    let g = |dx: f64, dy: f64| metric.components(x + dx, y + dy);
    let c = g(0.0, 0.0)?;
    let (xp, xm, yp, ym) = (g(h, 0.0)?, g(-h, 0.0)?, g(0.0, h)?, g(0.0, -h)?);
    let (pp, pm, mp, mm) = (g(h, h)?, g(h, -h)?, g(-h, h)?, g(-h, -h)?);
    let d_u = |i: usize| (xp[i] - xm[i]) / (2.0 * h);
    let d_v = |i: usize| (yp[i] - ym[i]) / (2.0 * h);
    let d_uu = |i: usize| (xp[i] - 2.0 * c[i] + xm[i]) / (h * h);
    let d_vv = |i: usize| (yp[i] - 2.0 * c[i] + ym[i]) / (h * h);
    let d_uv = |i: usize| (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h * h);
    let [e, f, gg] = c;
    let (e_u, e_v) = (d_u(0), d_v(0));
    let (f_u, f_v) = (d_u(1), d_v(1));
    let (g_u, g_v) = (d_u(2), d_v(2));
    let m1 = [
        [-0.5 * d_vv(0) + d_uv(1) - 0.5 * d_uu(2), 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, e, f],
        [0.5 * g_v, f, gg],
    ];
    let m2 = [
        [0.0, 0.5 * e_v, 0.5 * g_u],
        [0.5 * e_v, e, f],
        [0.5 * g_u, f, gg],
    ];
    let det = e * gg - f * f;
    Ok((det3(&m1) - det3(&m2)) / (det * det))
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}
