//! Integration of Hamilton's equations with conservation diagnostics.

mod dopri;
mod midpoint;
mod record;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{SystemDef, FLOW_MARGIN};
use crate::error::{Error, Result};
use crate::observable::Observable;
use crate::types::PhasePoint;

pub use dopri::Tolerance;
pub use midpoint::{midpoint_step, NewtonConfig};
pub use record::{drift_report, DriftSummary, RunStatus, TrajectoryRecord};

/// `(∂H/∂p, −∂H/∂q)` from the exact gradient.
pub fn vector_field(h: &Observable, z: &[f64; 4]) -> Result<[f64; 4]> {
    let g = h.gradient_raw(z)?;
    Ok([g[2], g[3], -g[0], -g[1]])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ImplicitMidpoint,
    AdaptiveRk,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ImplicitMidpoint => "implicit_midpoint",
            Method::AdaptiveRk => "adaptive_rk",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "implicit_midpoint" | "midpoint" => Ok(Method::ImplicitMidpoint),
            "adaptive_rk" | "adaptive" | "dopri5" => Ok(Method::AdaptiveRk),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step of the midpoint rule; initial step guess for the adaptive method.
    pub step: f64,
    pub tolerance: Tolerance,
    pub newton: NewtonConfig,
    /// Spacing of recorded rows; rows sit at `k·interval`, `k = 0..=⌊t_end/interval⌋`.
    pub sample_interval: f64,
    /// Distance from the singular sets at which a run is truncated.
    pub domain_margin: f64,
    /// Guard against runaway step-size collapse in the adaptive method.
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::AdaptiveRk,
            step: 1e-3,
            tolerance: Tolerance {
                rel: 1e-11,
                abs: 1e-11,
            },
            newton: NewtonConfig::default(),
            sample_interval: 0.1,
            domain_margin: FLOW_MARGIN,
            max_steps: 50_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn midpoint(step: f64) -> Self {
        IntegratorConfig {
            method: Method::ImplicitMidpoint,
            step,
            ..Self::default()
        }
    }

    pub fn adaptive(rel: f64, abs: f64) -> Self {
        IntegratorConfig {
            method: Method::AdaptiveRk,
            tolerance: Tolerance { rel, abs },
            ..Self::default()
        }
    }

    pub fn with_sample_interval(mut self, interval: f64) -> Self {
        self.sample_interval = interval;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{what} must be positive and finite, got {v}")))
            }
        };
        positive(self.step, "step")?;
        positive(self.tolerance.rel, "relative tolerance")?;
        positive(self.tolerance.abs, "absolute tolerance")?;
        positive(self.newton.tol, "Newton tolerance")?;
        positive(self.sample_interval, "sample interval")?;
        if self.newton.max_iters == 0 {
            return Err(Error::Config("Newton iteration cap must be ≥ 1".into()));
        }
        if self.domain_margin.is_nan() || self.domain_margin < 0.0 {
            return Err(Error::Config("domain margin must be ≥ 0".into()));
        }
        Ok(())
    }
}

/// Observables recorded along a trajectory: `H` then every listed integral
/// that is not `H` itself, all pulled back to the system chart.
fn tracked(sys: &SystemDef) -> Vec<Observable> {
    let chart = sys.chart();
    let mut out = vec![sys.hamiltonian.clone()];
    for i in &sys.integrals {
        if i.name() != sys.hamiltonian.name() {
            out.push(i.in_chart(chart));
        }
    }
    out
}

fn in_flow_domain(sys: &SystemDef, z: &[f64; 4], margin: f64) -> bool {
    match PhasePoint::from_array(sys.chart(), *z) {
        Ok(p) => sys.domain.contains_with_margin(&p, margin),
        Err(_) => false,
    }
}

/// Evaluation failures inside a step mean the trial state left the domain.
fn is_domain_error(e: &Error) -> bool {
    matches!(
        e,
        Error::DomainViolation(_)
            | Error::DerivativeSingular(_)
            | Error::AngularSingularity { .. }
            | Error::NegativeJ2(_)
            | Error::ZeroModulus(_)
    )
}

/// Integrate the flow of `sys.hamiltonian` from `x0` up to `t_end`.
///
/// Leaving the domain (within `cfg.domain_margin` of a singular set)
/// truncates the record and sets [`RunStatus::DomainExit`].
pub fn integrate(sys: &SystemDef, x0: &PhasePoint, t_end: f64, cfg: &IntegratorConfig) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::Config(format!("t_end must be positive, got {t_end}")));
    }
    let start = crate::coords::to_chart(x0, sys.chart())?;
    if !sys.domain.contains_with_margin(&start, cfg.domain_margin) {
        return Err(Error::DomainViolation(format!(
            "initial point {:?} is outside the domain of {}",
            x0.as_array(),
            sys.id
        )));
    }
    let observables = tracked(sys);
    let mut record = TrajectoryRecord::new(sys, cfg, t_end, &observables);
    let h = &sys.hamiltonian;
    let mut z = start.as_array();
    record.push(0.0, &z, &observables)?;

    let rows = (t_end / cfg.sample_interval + 1e-9).floor() as usize;
    let mut t = 0.0;
    let mut dt = cfg.step;
    let mut steps = 0usize;
    for k in 1..=rows {
        let target = k as f64 * cfg.sample_interval;
        let outcome = match cfg.method {
            Method::ImplicitMidpoint => advance_midpoint(sys, h, &mut z, &mut t, target, cfg),
            Method::AdaptiveRk => advance_adaptive(sys, h, &mut z, &mut t, &mut dt, target, cfg, &mut steps),
        };
        match outcome {
            Ok(true) => {
                if let Err(e) = record.push(target, &z, &observables) {
                    if is_domain_error(&e) {
                        record.status = RunStatus::DomainExit { time: t };
                        break;
                    }
                    return Err(e);
                }
            }
            Ok(false) => {
                record.status = RunStatus::DomainExit { time: t };
                break;
            }
            Err(e) => return Err(e),
        }
    }
    record.finish();
    Ok(record)
}

/// Advance to `target` in equal midpoint steps no longer than `cfg.step`.
/// `Ok(false)` signals a domain exit.
fn advance_midpoint(
    sys: &SystemDef,
    h: &Observable,
    z: &mut [f64; 4],
    t: &mut f64,
    target: f64,
    cfg: &IntegratorConfig,
) -> Result<bool> {
    let span = target - *t;
    let n = (span / cfg.step - 1e-9).ceil().max(1.0) as usize;
    let dt = span / n as f64;
    let t0 = *t;
    for i in 0..n {
        let next = match midpoint_step(h, z, dt, &cfg.newton, *t) {
            Ok(next) => next,
            Err(e) if is_domain_error(&e) => return Ok(false),
            Err(e) => return Err(e),
        };
        if !in_flow_domain(sys, &next, cfg.domain_margin) {
            return Ok(false);
        }
        *z = next;
        *t = t0 + (i + 1) as f64 * dt;
    }
    *t = target;
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn advance_adaptive(
    sys: &SystemDef,
    h: &Observable,
    z: &mut [f64; 4],
    t: &mut f64,
    dt: &mut f64,
    target: f64,
    cfg: &IntegratorConfig,
    steps: &mut usize,
) -> Result<bool> {
    let min_dt = 1e-14 * target.max(1.0);
    while *t < target {
        if *steps >= cfg.max_steps {
            return Err(Error::Config(format!("step budget of {} exhausted at t = {}", cfg.max_steps, t)));
        }
        let remaining = target - *t;
        let clipped = remaining <= *dt * (1.0 + 1e-12);
        let trial = if clipped { remaining } else { *dt };
        let (next, err) = match dopri::try_step(h, z, trial, &cfg.tolerance) {
            Ok(v) => v,
            Err(e) if is_domain_error(&e) => {
                // A stage left the domain: retry smaller, give up near the edge.
                *dt = trial * 0.25;
                if *dt < min_dt {
                    return Ok(false);
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        *steps += 1;
        if err <= 1.0 {
            if !in_flow_domain(sys, &next, cfg.domain_margin) {
                return Ok(false);
            }
            *z = next;
            *t = if clipped { target } else { *t + trial };
            let proposal = dopri::next_step(trial, err);
            // keep the pre-clip step so landing on a sample time does not shrink it
            *dt = if clipped { dt.max(proposal) } else { proposal };
        } else {
            *dt = dopri::next_step(trial, err);
            if *dt < min_dt {
                return Err(Error::Config(format!("step size underflow at t = {t}")));
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_system, SystemId};
    use crate::types::ParamSet;

    fn circular_oscillator() -> SystemDef {
        let p = ParamSet {
            k2: 0.0,
            k3: 0.0,
            ..ParamSet::default()
        };
        build_system(SystemId::EuclidA, &p).unwrap()
    }

    #[test]
    fn circular_orbit_closes() {
        let mut sys = circular_oscillator();
        // the barrier-free oscillator may cross the axes
        sys.domain.constraints.clear();
        let x0 = PhasePoint::cartesian(1.0, 0.0, 0.0, 1.0).unwrap();
        let t_end = 2.0 * std::f64::consts::PI;
        for cfg in [
            IntegratorConfig::adaptive(1e-11, 1e-11).with_sample_interval(t_end / 100.0),
            IntegratorConfig::midpoint(1e-4).with_sample_interval(t_end / 100.0),
        ] {
            let rec = integrate(&sys, &x0, t_end, &cfg).unwrap();
            let last = rec.points.last().unwrap();
            for (a, b) in last.iter().zip(x0.as_array()) {
                assert!((a - b).abs() < 1e-6, "{:?}", cfg.method);
            }
            assert_eq!(rec.times.len(), 101);
        }
    }

    #[test]
    fn row_count_follows_interval() {
        let sys = build_system(SystemId::DefA, &ParamSet::default().with_kappa(0.1)).unwrap();
        let x0 = PhasePoint::cartesian(0.6, 0.5, 0.1, -0.2).unwrap();
        let cfg = IntegratorConfig::adaptive(1e-9, 1e-9).with_sample_interval(0.3);
        let rec = integrate(&sys, &x0, 1.0, &cfg).unwrap();
        assert_eq!(rec.times.len(), 4);
        assert!(rec.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn midpoint_is_time_symmetric() {
        let sys = build_system(SystemId::DefC, &ParamSet::default().with_kappa(0.3)).unwrap();
        let z0 = [1.2, 0.8, 0.3, -0.1];
        let cfg = NewtonConfig::default();
        let mut z = z0;
        for _ in 0..200 {
            z = midpoint_step(&sys.hamiltonian, &z, 1e-2, &cfg, 0.0).unwrap();
        }
        for _ in 0..200 {
            z = midpoint_step(&sys.hamiltonian, &z, -1e-2, &cfg, 0.0).unwrap();
        }
        for i in 0..4 {
            assert!((z[i] - z0[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn start_outside_domain_is_rejected() {
        let sys = build_system(SystemId::DefC, &ParamSet::default().with_kappa(0.5)).unwrap();
        let x0 = PhasePoint::cartesian(0.2, 0.2, 0.0, 0.0).unwrap();
        let err = integrate(&sys, &x0, 1.0, &IntegratorConfig::default()).unwrap_err();
        assert!(matches!(err, Error::DomainViolation(_)));
    }

    #[test]
    fn escaping_orbit_is_truncated() {
        // attractive Kepler-like centre: a radial plunge hits the singular set
        let mut p = ParamSet::default().with_kappa(0.0);
        p.k1 = -1.0;
        p.k2 = 0.0;
        p.k3 = 0.0;
        let mut sys = build_system(SystemId::EuclidC, &p).unwrap();
        sys.domain.constraints.retain(|c| *c == crate::catalog::Constraint::AwayFromOrigin);
        let x0 = PhasePoint::cartesian(1.0, 0.3, -0.5, -0.15).unwrap();
        let rec = integrate(&sys, &x0, 10.0, &IntegratorConfig::default()).unwrap();
        assert!(matches!(rec.status, RunStatus::DomainExit { .. }));
        assert!(rec.times.len() < 101);
    }
}
