//! Aggregate certification of a catalog system: brackets, independence,
//! factorization identities and the κ → 0 limit.

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{build_system, SystemDef, SystemId};
use crate::coords::evaluate_in_chart;
use crate::error::{Error, Result};
use crate::factorization::{build_factorization, moduli, ComplexPair, Family};
use crate::observable::Observable;
use crate::poisson::{
    bracket_report, certify_on_points, independence_rank, scaled_bracket, scaled_residual, BracketReport, Verdict,
    BRACKET_TOL, RANK_THRESHOLD,
};
use crate::types::PhasePoint;

/// Default κ values of the limit sweep.
pub const SWEEP_KAPPAS: [f64; 3] = [1e-2, 1e-3, 1e-4];
/// Accepted log-log slope window for the κ → 0 deviation.
pub const SLOPE_WINDOW: (f64, f64) = (0.85, 1.15);
/// Deviations at or below this count as identically zero.
pub const EXACT_ZERO: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyConfig {
    pub seed: u64,
    pub n_points: usize,
    pub bracket_tol: f64,
    pub rank_threshold: f64,
    /// Fraction of points at which the triple must have full rank.
    pub rank_fraction: f64,
    /// Relative tolerance of the moduli identities.
    pub moduli_tol: f64,
    pub sweep_kappas: Vec<f64>,
    pub sweep_points: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            seed: 0,
            n_points: 500,
            bracket_tol: BRACKET_TOL,
            rank_threshold: RANK_THRESHOLD,
            rank_fraction: 0.95,
            moduli_tol: 1e-10,
            sweep_kappas: SWEEP_KAPPAS.to_vec(),
            sweep_points: 50,
        }
    }
}

/// Outcome of a pointwise identity other than a plain bracket.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub points_tested: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankReport {
    pub observables: Vec<String>,
    pub expected_rank: usize,
    pub points_tested: usize,
    pub points_at_expected_rank: usize,
    pub fraction: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub deformed: String,
    pub limit: String,
    pub kappas: Vec<f64>,
    pub deviations: Vec<f64>,
    /// Least-squares slope of `log dev` against `log κ`; `None` for identically zero rows.
    pub slope: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub system: String,
    pub limit_system: String,
    pub points: usize,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    /// `kappa,<deformed>-<limit>...` table, one line per κ.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kappa");
        for r in &self.rows {
            out.push_str(&format!(",{}-{}", r.deformed, r.limit));
        }
        out.push('\n');
        let n = self.rows.first().map_or(0, |r| r.kappas.len());
        for i in 0..n {
            out.push_str(&format!("{:.16e}", self.rows[0].kappas[i]));
            for r in &self.rows {
                out.push_str(&format!(",{:.16e}", r.deviations[i]));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifyReport {
    pub system: String,
    pub params: crate::types::ParamSet,
    pub seed: u64,
    pub points: usize,
    pub brackets: Vec<BracketReport>,
    pub identities: Vec<IdentityCheck>,
    pub ranks: Vec<RankReport>,
    pub kappa_limit: Option<SweepReport>,
    pub passed: bool,
}

/// Run every applicable check on `sys`.
pub fn certify(sys: &SystemDef, cfg: &CertifyConfig) -> Result<CertifyReport> {
    let points = sys.sample(cfg.seed, cfg.n_points)?;
    let brackets = certify_on_points(sys, &points, cfg.bracket_tol)?;
    let mut identities = Vec::new();
    let mut ranks = Vec::new();

    if let Some(names) = &sys.independent {
        let obs = names.iter().map(|n| sys.observable(n)).collect::<Result<Vec<_>>>()?;
        ranks.push(rank_report(&obs, &points, 3, cfg)?);
    }

    if let Some(family) = family_of(sys.id) {
        identities.extend(factorization_checks(sys, family, &points, cfg)?);
        let re = sys.observable("ReK")?;
        let im = sys.observable("ImK")?;
        let k_sq = re.mul(re).add(&im.mul(im)).renamed("|K|^2");
        let obs = [sys.observable("J1")?, sys.observable("J2")?, &k_sq];
        ranks.push(rank_report(&obs, &points, 2, cfg)?);
    }

    if sys.id == SystemId::CurvedKeplerK2 {
        identities.push(runge_lenz_check(sys, &points, cfg.bracket_tol)?);
    }

    let kappa_limit = match &sys.euclidean_limit {
        Some(_) if sys.id != SystemId::GenericPolar => Some(kappa_sweep(sys.id, &sys.params, cfg)?),
        _ => None,
    };

    let passed = brackets.iter().all(|b| b.verdict == Verdict::Commutes)
        && identities.iter().all(|c| c.passed)
        && ranks.iter().all(|r| r.passed)
        && kappa_limit.as_ref().is_none_or(|s| s.passed());
    Ok(CertifyReport {
        system: sys.id.to_string(),
        params: sys.params,
        seed: cfg.seed,
        points: points.len(),
        brackets,
        identities,
        ranks,
        kappa_limit,
        passed,
    })
}

pub fn family_of(id: SystemId) -> Option<Family> {
    match id {
        SystemId::TtwDef => Some(Family::Oscillator),
        SystemId::PwDef => Some(Family::Kepler),
        _ => None,
    }
}

fn rank_report(obs: &[&Observable], points: &[PhasePoint], expected: usize, cfg: &CertifyConfig) -> Result<RankReport> {
    let ranks: Vec<usize> = points
        .par_iter()
        .map(|pt| independence_rank(obs, pt, cfg.rank_threshold))
        .collect::<Result<_>>()?;
    let hits = ranks.iter().filter(|r| **r == expected).count();
    let fraction = hits as f64 / points.len() as f64;
    Ok(RankReport {
        observables: obs.iter().map(|o| o.name().to_string()).collect(),
        expected_rank: expected,
        points_tested: points.len(),
        points_at_expected_rank: hits,
        fraction,
        passed: fraction >= cfg.rank_fraction,
    })
}

fn max_over<F>(points: &[PhasePoint], f: F) -> Result<f64>
where
    F: Fn(&PhasePoint) -> Result<f64> + Sync + Send,
{
    let v: Vec<f64> = points.par_iter().map(f).collect::<Result<_>>()?;
    Ok(v.into_iter().fold(0.0, f64::max))
}

fn identity(name: impl Into<String>, points: usize, max_residual: f64, tolerance: f64) -> IdentityCheck {
    IdentityCheck {
        name: name.into(),
        points_tested: points,
        max_residual,
        tolerance,
        passed: max_residual <= tolerance,
    }
}

/// Scaled residuals of `{re,H} + c·λ·im` and `{im,H} − c·λ·re`.
pub fn rate_residuals(pair: &ComplexPair, lambda: &Observable, h: &Observable, pt: &PhasePoint) -> Result<(f64, f64)> {
    let (b_re, s_re) = scaled_bracket(&pair.re, h, pt)?;
    let (b_im, s_im) = scaled_bracket(&pair.im, h, pt)?;
    let lam = evaluate_in_chart(lambda, pt)?;
    let re = evaluate_in_chart(&pair.re, pt)?;
    let im = evaluate_in_chart(&pair.im, pt)?;
    let t_re = pair.rate * lam * im;
    let t_im = pair.rate * lam * re;
    Ok((
        scaled_residual(b_re + t_re, s_re + t_re.abs()),
        scaled_residual(b_im - t_im, s_im + t_im.abs()),
    ))
}

fn factorization_checks(
    sys: &SystemDef,
    family: Family,
    points: &[PhasePoint],
    cfg: &CertifyConfig,
) -> Result<Vec<IdentityCheck>> {
    let fac = build_factorization(family, &sys.params)?;
    let h = &sys.hamiltonian;
    let n = points.len();
    let mut out = Vec::new();
    for (label, pair) in [("A", &fac.a), ("B", &fac.b)] {
        let worst = |first: bool| {
            max_over(points, |pt| {
                let (r1, r2) = rate_residuals(pair, &fac.lambda, h, pt)?;
                Ok(if first { r1 } else { r2 })
            })
        };
        out.push(identity(format!("rate {label}1"), n, worst(true)?, cfg.bracket_tol));
        out.push(identity(format!("rate {label}2"), n, worst(false)?, cfg.bracket_tol));
    }
    let md = moduli(family, &sys.params)?;
    for (label, lhs, rhs, scale) in [
        ("modulus |A|^2", &md.a_sq, &md.a_rhs, &md.a_scale),
        ("modulus |B|^2", &md.b_sq, &md.b_rhs, &md.b_scale),
    ] {
        let worst = max_over(points, |pt| {
            let l = evaluate_in_chart(lhs, pt)?;
            let r = evaluate_in_chart(rhs, pt)?;
            let s = evaluate_in_chart(scale, pt)?;
            Ok((l - r).abs() / s.max(1e-300))
        })?;
        out.push(identity(label, n, worst, cfg.moduli_tol));
    }
    for obs in [&md.a_sq, &md.b_sq] {
        let r = bracket_report(obs, h, points, cfg.bracket_tol)?;
        out.push(identity(
            format!("{{{}, H}}", obs.name()),
            n,
            r.max_scaled_residual,
            cfg.bracket_tol,
        ));
    }
    Ok(out)
}

/// `{J2, J3} − 2·L·H`, scaled by `‖∇J2‖‖∇J3‖`.
pub fn runge_lenz_check(sys: &SystemDef, points: &[PhasePoint], tol: f64) -> Result<IdentityCheck> {
    let j2 = sys.observable("J2")?;
    let j3 = sys.observable("J3")?;
    let worst = max_over(points, |pt| {
        let (b, s) = scaled_bracket(j2, j3, pt)?;
        let c = crate::coords::to_chart(pt, crate::types::Chart::Cartesian)?;
        let l = c.q1() * c.p2() - c.q2() * c.p1();
        let h = evaluate_in_chart(&sys.hamiltonian, pt)?;
        Ok(scaled_residual(b - 2.0 * l * h, s))
    })?;
    Ok(identity("{J2, J3} - 2 L H", points.len(), worst, tol))
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

/// Maximum deviation `|J(κ) − I|` over fixed points, for each κ in the
/// configured sweep, with a log-log slope per integral pair.
pub fn kappa_sweep(id: SystemId, params: &crate::types::ParamSet, cfg: &CertifyConfig) -> Result<SweepReport> {
    if cfg.sweep_kappas.len() < 2 || cfg.sweep_kappas.iter().any(|k| k.is_nan() || *k <= 0.0) {
        return Err(Error::Config("the κ sweep needs at least two positive values".into()));
    }
    let largest = cfg.sweep_kappas.iter().copied().fold(0.0, f64::max);
    let probe = build_system(id, &params.with_kappa(largest))?;
    let limit = probe
        .euclidean_limit
        .clone()
        .ok_or_else(|| Error::NoEuclideanLimit(id.to_string()))?;
    let flat = build_system(limit.id, &limit.params)?;
    let points: Vec<PhasePoint> = probe
        .sample(cfg.seed, cfg.sweep_points)?
        .into_iter()
        .filter(|p| flat.domain.contains(&crate::coords::to_chart(p, flat.chart()).unwrap_or(*p)))
        .collect();
    if points.is_empty() {
        return Err(Error::SamplingFailed {
            attempts: cfg.sweep_points,
            accepted: 0,
            requested: cfg.sweep_points,
        });
    }
    let deformed: Vec<SystemDef> = cfg
        .sweep_kappas
        .iter()
        .map(|k| build_system(id, &params.with_kappa(*k)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (dname, lname) in &limit.pairs {
        let reference = flat.observable(lname)?;
        let mut deviations = Vec::new();
        for sys in &deformed {
            let obs = sys.observable(dname)?;
            let dev = max_over(&points, |pt| {
                Ok((evaluate_in_chart(obs, pt)? - evaluate_in_chart(reference, pt)?).abs())
            })?;
            deviations.push(dev);
        }
        let exact = deviations.iter().all(|d| *d <= EXACT_ZERO);
        let slope = (!exact && deviations.iter().all(|d| *d > 0.0))
            .then(|| loglog_slope(&cfg.sweep_kappas, &deviations));
        let passed = exact || slope.is_some_and(|s| s >= SLOPE_WINDOW.0 && s <= SLOPE_WINDOW.1);
        rows.push(SweepRow {
            deformed: dname.clone(),
            limit: lname.clone(),
            kappas: cfg.sweep_kappas.clone(),
            deviations,
            slope,
            passed,
        });
    }
    Ok(SweepReport {
        system: id.to_string(),
        limit_system: limit.id.to_string(),
        points: points.len(),
        rows,
    })
}
