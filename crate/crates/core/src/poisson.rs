//! Numerical Poisson brackets from exact dual gradients.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::SystemDef;
use crate::error::{Error, Result};
use crate::observable::Observable;
use crate::types::PhasePoint;

/// Default tolerance on the scaled residual.
pub const BRACKET_TOL: f64 = 1e-10;
/// Default relative singular-value threshold.
pub const RANK_THRESHOLD: f64 = 1e-8;
/// Finite-difference step used for nested brackets.
pub const JACOBI_STEP: f64 = 1e-5;

/// `Σ ∂f/∂q ∂g/∂p − ∂f/∂p ∂g/∂q` from two gradients.
#[inline]
pub fn bracket_of_gradients(df: &[f64; 4], dg: &[f64; 4]) -> f64 {
    (df[0] * dg[2] - df[2] * dg[0]) + (df[1] * dg[3] - df[3] * dg[1])
}

fn norm(v: &[f64; 4]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_chart(obs: &Observable, point: &PhasePoint) -> Result<()> {
    if obs.chart() != point.chart() {
        return Err(Error::ChartMismatch {
            expected: obs.chart(),
            found: point.chart(),
        });
    }
    Ok(())
}

/// `{f, g}` at `point`. Both observables must be native to the point's chart.
pub fn poisson_bracket(f: &Observable, g: &Observable, point: &PhasePoint) -> Result<f64> {
    check_chart(f, point)?;
    check_chart(g, point)?;
    Ok(bracket_of_gradients(&f.gradient(point)?, &g.gradient(point)?))
}

/// Bracket together with its scale `‖∇f‖·‖∇g‖`. Observables from other
/// charts are pulled back to the point's chart first.
pub fn scaled_bracket(f: &Observable, g: &Observable, point: &PhasePoint) -> Result<(f64, f64)> {
    let chart = point.chart();
    let df = f.in_chart(chart).gradient(point)?;
    let dg = g.in_chart(chart).gradient(point)?;
    Ok((bracket_of_gradients(&df, &dg), norm(&df) * norm(&dg)))
}

/// `|{f,g}| / (‖∇f‖‖∇g‖ + 1e-300)`.
pub fn scaled_residual(value: f64, scale: f64) -> f64 {
    value.abs() / (scale + 1e-300)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Commutes,
    Fails,
}

/// Worst-case residuals of one bracket over a point set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    pub pair: (String, String),
    pub points_tested: usize,
    pub max_abs_residual: f64,
    pub max_scaled_residual: f64,
    pub verdict: Verdict,
}

/// Bracket of `f` and `g` over every point, judged against `tol`.
pub fn bracket_report(
    f: &Observable,
    g: &Observable,
    points: &[PhasePoint],
    tol: f64,
) -> Result<BracketReport> {
    let chart = points.first().map(|p| p.chart());
    let (f, g) = match chart {
        Some(c) => (f.in_chart(c), g.in_chart(c)),
        None => (f.clone(), g.clone()),
    };
    let residuals: Vec<(f64, f64)> = points
        .par_iter()
        .map(|pt| {
            let df = f.in_chart(pt.chart()).gradient(pt)?;
            let dg = g.in_chart(pt.chart()).gradient(pt)?;
            let b = bracket_of_gradients(&df, &dg);
            Ok((b.abs(), scaled_residual(b, norm(&df) * norm(&dg))))
        })
        .collect::<Result<_>>()?;
    let max_abs = residuals.iter().map(|r| r.0).fold(0.0, f64::max);
    let max_scaled = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(BracketReport {
        pair: (f.name().to_string(), g.name().to_string()),
        points_tested: points.len(),
        max_abs_residual: max_abs,
        max_scaled_residual: max_scaled,
        verdict: if max_scaled <= tol {
            Verdict::Commutes
        } else {
            Verdict::Fails
        },
    })
}

/// One report per integral against `H` (skipping `H` itself) and one per
/// declared involutive pair.
pub fn certify_involution(sys: &SystemDef, seed: u64, n: usize, tol: f64) -> Result<Vec<BracketReport>> {
    let points = sys.sample(seed, n)?;
    certify_on_points(sys, &points, tol)
}

pub fn certify_on_points(sys: &SystemDef, points: &[PhasePoint], tol: f64) -> Result<Vec<BracketReport>> {
    let h = &sys.hamiltonian;
    let mut reports = Vec::new();
    for integral in &sys.integrals {
        if integral.name() == h.name() {
            continue;
        }
        reports.push(bracket_report(integral, h, points, tol)?);
    }
    for (a, b) in &sys.involutive_pairs {
        reports.push(bracket_report(sys.observable(a)?, sys.observable(b)?, points, tol)?);
    }
    Ok(reports)
}

/// Singular values of the stacked, row-normalised gradient matrix, descending.
pub fn gradient_singular_values(observables: &[&Observable], point: &PhasePoint) -> Result<Vec<f64>> {
    if observables.is_empty() {
        return Err(Error::Config("independence test needs at least one observable".into()));
    }
    let chart = point.chart();
    let mut m = DMatrix::<f64>::zeros(observables.len(), 4);
    for (i, obs) in observables.iter().enumerate() {
        let g = obs.in_chart(chart).gradient(point)?;
        let n = norm(&g);
        if n > 0.0 {
            for k in 0..4 {
                m[(i, k)] = g[k] / n;
            }
        }
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Number of singular values with `σ_i / σ_1 > threshold`.
pub fn independence_rank(observables: &[&Observable], point: &PhasePoint, threshold: f64) -> Result<usize> {
    let sv = gradient_singular_values(observables, point)?;
    let top = sv[0];
    if top == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|s| **s / top > threshold).count())
}

fn shifted(point: &PhasePoint, k: usize, h: f64) -> Result<PhasePoint> {
    let mut z = point.as_array();
    z[k] += h;
    PhasePoint::from_array(point.chart(), z)
}

/// Gradient of `{g, h}` by central differences of exact brackets.
fn bracket_gradient(g: &Observable, h: &Observable, point: &PhasePoint, step: f64) -> Result<[f64; 4]> {
    let central = |k: usize, s: f64| -> Result<f64> {
        let plus = scaled_bracket(g, h, &shifted(point, k, s)?)?.0;
        let minus = scaled_bracket(g, h, &shifted(point, k, -s)?)?.0;
        Ok((plus - minus) / (2.0 * s))
    };
    let mut out = [0.0; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        // Richardson: cancels the O(step²) truncation term
        *slot = (4.0 * central(k, step / 2.0)? - central(k, step)?) / 3.0;
    }
    Ok(out)
}

/// `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}` with the inner brackets differentiated
/// numerically. Returned with a magnitude: the three term sizes plus
/// `‖∇f‖‖∇g‖‖∇h‖`, which stays meaningful when every bracket vanishes.
/// A weaker check than the first-order brackets.
pub fn jacobi_residual(f: &Observable, g: &Observable, h: &Observable, point: &PhasePoint, step: f64) -> Result<(f64, f64)> {
    let chart = point.chart();
    let grad = |o: &Observable| o.in_chart(chart).gradient(point);
    let (df, dg, dh) = (grad(f)?, grad(g)?, grad(h)?);
    let (bgh, bhf, bfg) = (
        bracket_gradient(g, h, point, step)?,
        bracket_gradient(h, f, point, step)?,
        bracket_gradient(f, g, point, step)?,
    );
    let t1 = bracket_of_gradients(&df, &bgh);
    let t2 = bracket_of_gradients(&dg, &bhf);
    let t3 = bracket_of_gradients(&dh, &bfg);
    let scale = norm(&df) * norm(&bgh)
        + norm(&dg) * norm(&bhf)
        + norm(&dh) * norm(&bfg)
        + norm(&df) * norm(&dg) * norm(&dh);
    Ok((t1 + t2 + t3, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_system, SystemId};
    use crate::types::{Chart, ParamSet};

    #[test]
    fn canonical_pairs() {
        for chart in Chart::ALL {
            let z = match chart {
                Chart::Polar => [1.2, 0.3, -0.4, 0.8],
                _ => [0.7, 0.6, -0.4, 0.8],
            };
            let pt = PhasePoint::from_array(chart, z).unwrap();
            let q1 = Observable::coordinate(chart, 0);
            let p1 = Observable::coordinate(chart, 2);
            let q2 = Observable::coordinate(chart, 1);
            assert_eq!(poisson_bracket(&q1, &p1, &pt).unwrap(), 1.0);
            assert_eq!(poisson_bracket(&p1, &q1, &pt).unwrap(), -1.0);
            assert_eq!(poisson_bracket(&q1, &q2, &pt).unwrap(), 0.0);
        }
    }

    #[test]
    fn transformed_coordinates_stay_canonical() {
        // {a, p_a} computed in Cartesian coordinates through the pullback
        let pt = PhasePoint::cartesian(0.7, 0.6, -0.4, 0.8).unwrap();
        let a = Observable::coordinate(Chart::Parabolic, 0);
        let pa = Observable::coordinate(Chart::Parabolic, 2);
        let pb = Observable::coordinate(Chart::Parabolic, 3);
        let (v, _) = scaled_bracket(&a, &pa, &pt).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        let (w, _) = scaled_bracket(&pa, &pb, &pt).unwrap();
        assert!(w.abs() < 1e-14);
    }

    #[test]
    fn chart_mismatch() {
        let pt = PhasePoint::cartesian(0.7, 0.6, -0.4, 0.8).unwrap();
        let r = Observable::coordinate(Chart::Polar, 0);
        assert!(matches!(
            poisson_bracket(&r, &r, &pt),
            Err(Error::ChartMismatch { .. })
        ));
    }

    #[test]
    fn antisymmetry_and_self_bracket() {
        let sys = build_system(SystemId::DefB, &ParamSet::default().with_kappa(0.2)).unwrap();
        let (f, g) = (&sys.integrals[0], &sys.integrals[2]);
        for pt in sys.sample(1, 50).unwrap() {
            let a = poisson_bracket(f, g, &pt).unwrap();
            let b = poisson_bracket(g, f, &pt).unwrap();
            assert_eq!(a, -b);
            assert_eq!(poisson_bracket(f, f, &pt).unwrap(), 0.0);
        }
    }

    #[test]
    fn rank_of_repeated_rows() {
        let sys = build_system(SystemId::DefA, &ParamSet::default().with_kappa(0.1)).unwrap();
        let pt = sys.sample(2, 1).unwrap()[0];
        let h = &sys.hamiltonian;
        assert_eq!(independence_rank(&[h, h, h], &pt, RANK_THRESHOLD).unwrap(), 1);
        let ints: Vec<&Observable> = sys.integrals.iter().collect();
        assert_eq!(independence_rank(&ints, &pt, RANK_THRESHOLD).unwrap(), 3);
    }

    #[test]
    fn report_verdict_follows_tolerance() {
        let sys = build_system(SystemId::DefA, &ParamSet::default().with_kappa(0.1)).unwrap();
        let reports = certify_involution(&sys, 3, 100, BRACKET_TOL).unwrap();
        assert_eq!(reports.len(), 4);
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Commutes, "{r:?}");
            assert_eq!(r.points_tested, 100);
        }
        let json = serde_json::to_string(&reports[0]).unwrap();
        assert!(json.contains("\"verdict\":\"commutes\""));
    }
}
