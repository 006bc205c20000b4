use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;
use superint_core::certify::{certify, kappa_sweep, CertifyConfig, CertifyReport};
use superint_core::dynamics::{drift_report, integrate, IntegratorConfig, Method, RunStatus};
use superint_core::geometry::{curvature, curvature_oracle, MetricDef, MetricId, ORACLE_STEP};
use superint_core::poisson::{BRACKET_TOL, RANK_THRESHOLD};
use superint_core::profile::{potential_profile, profile_csv};
use superint_core::{build_system, build_system_by_name, SystemId};

use crate::config::{Format, RunConfig};
use crate::{CliError, Outcome};

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

pub fn list(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    for id in SystemId::ALL {
        let sys = build_system(id, &Default::default())?;
        rows.push((id, sys.integral_names()));
    }
    let text = match cfg.format() {
        Format::Json => pretty(
            &rows
                .iter()
                .map(|(id, integrals)| {
                    json!({
                        "id": id.as_str(),
                        "params": id.param_names(),
                        "integrals": integrals,
                        "family": id.family(),
                    })
                })
                .collect::<Vec<_>>(),
        ),
        Format::Csv => {
            let mut s = String::new();
            for (id, integrals) in &rows {
                writeln!(
                    s,
                    "{:<18} params: {:<26} integrals: {:<36} {}",
                    id.as_str(),
                    id.param_names().join(","),
                    integrals.join(","),
                    id.family()
                )
                .unwrap();
            }
            s
        }
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(Outcome::Pass)
}

fn certify_config(cfg: &RunConfig) -> Result<CertifyConfig, CliError> {
    cfg.check_tol_keys(&["bracket", "rank", "rank_fraction", "moduli"])?;
    let defaults = CertifyConfig::default();
    let n = cfg.n.unwrap_or(defaults.n_points);
    if n == 0 {
        return Err(CliError::Config("--n must be at least 1".into()));
    }
    let rank_fraction = cfg.tol("rank_fraction", defaults.rank_fraction)?;
    if rank_fraction > 1.0 {
        return Err(CliError::Config("rank_fraction must not exceed 1".into()));
    }
    Ok(CertifyConfig {
        seed: cfg.seed.unwrap_or(0),
        n_points: n,
        bracket_tol: cfg.tol("bracket", BRACKET_TOL)?,
        rank_threshold: cfg.tol("rank", RANK_THRESHOLD)?,
        rank_fraction,
        moduli_tol: cfg.tol("moduli", defaults.moduli_tol)?,
        ..defaults
    })
}

fn certify_csv(r: &CertifyReport) -> String {
    let mut s = String::from("kind,name,points,max_residual,tolerance,passed\n");
    for b in &r.brackets {
        let ok = b.verdict == superint_core::Verdict::Commutes;
        writeln!(
            s,
            "bracket,{{{} {}}},{},{:.16e},,{ok}",
            b.pair.0, b.pair.1, b.points_tested, b.max_scaled_residual
        )
        .unwrap();
    }
    for c in &r.identities {
        writeln!(
            s,
            "identity,{},{},{:.16e},{:e},{}",
            c.name, c.points_tested, c.max_residual, c.tolerance, c.passed
        )
        .unwrap();
    }
    for k in &r.ranks {
        writeln!(
            s,
            "rank{},{},{},{:.16e},,{}",
            k.expected_rank,
            k.observables.join(" "),
            k.points_tested,
            k.fraction,
            k.passed
        )
        .unwrap();
    }
    if let Some(sweep) = &r.kappa_limit {
        for row in &sweep.rows {
            let slope = row.slope.map_or("exact".to_string(), |v| format!("{v:.16e}"));
            writeln!(s, "slope,{} -> {},{},{slope},,{}", row.deformed, row.limit, sweep.points, row.passed).unwrap();
        }
    }
    s
}

pub fn certify_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let sys = build_system_by_name(cfg.system()?, &params)?;
    let report = certify(&sys, &certify_config(cfg)?)?;
    let text = match cfg.format() {
        Format::Json => pretty(&report),
        Format::Csv => certify_csv(&report),
    };
    emit(cfg.out.as_deref(), &text)?;
    eprintln!(
        "{} {}: {}",
        report.system,
        if report.passed { "PASS" } else { "FAIL" },
        summary_line(&report)
    );
    Ok(if report.passed { Outcome::Pass } else { Outcome::Fail })
}

fn summary_line(r: &CertifyReport) -> String {
    let worst = r.brackets.iter().map(|b| b.max_scaled_residual).fold(0.0, f64::max);
    format!(
        "{} brackets (worst {worst:.2e}), {} identities, {} rank checks on {} points",
        r.brackets.len(),
        r.identities.len(),
        r.ranks.len(),
        r.points
    )
}

fn integrator_config(cfg: &RunConfig) -> Result<IntegratorConfig, CliError> {
    cfg.check_tol_keys(&["rel", "abs", "newton", "drift"])?;
    let method: Method = cfg.method.as_deref().unwrap_or("adaptive").parse()?;
    let mut ic = match method {
        Method::ImplicitMidpoint => IntegratorConfig::midpoint(cfg.step.unwrap_or(1e-3)),
        Method::AdaptiveRk => {
            let d = IntegratorConfig::default().tolerance;
            let mut ic = IntegratorConfig::adaptive(cfg.tol("rel", d.rel)?, cfg.tol("abs", d.abs)?);
            if let Some(step) = cfg.step {
                ic.step = step;
            }
            ic
        }
    };
    ic.newton.tol = cfg.tol("newton", ic.newton.tol)?;
    if let Some(dt) = cfg.sample_interval {
        ic = ic.with_sample_interval(dt);
    }
    ic.validate()?;
    Ok(ic)
}

pub fn simulate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let sys = build_system_by_name(cfg.system()?, &params)?;
    let ic = integrator_config(cfg)?;
    let t_end = cfg
        .t_end
        .ok_or_else(|| CliError::Config("--t-end is required".into()))?;
    let x0 = cfg.x0()?;
    let record = integrate(&sys, &x0, t_end, &ic)?;

    let mut summary = record.summary_json();
    let drift_tol = cfg.tol("drift", f64::INFINITY)?;
    summary["drift"] = serde_json::to_value(drift_report(&record, drift_tol)).expect("drift serializes");
    let text = match cfg.format() {
        Format::Csv => record.to_csv(),
        Format::Json => pretty(&summary),
    };
    emit(cfg.out.as_deref(), &text)?;
    eprintln!("{summary}");
    Ok(match record.status {
        RunStatus::Completed => Outcome::Pass,
        RunStatus::DomainExit { time } => {
            eprintln!("warning: trajectory left the domain at t = {time}; output truncated");
            Outcome::DomainExit
        }
    })
}

pub fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let id: SystemId = cfg.system()?.parse()?;
    let mut cc = certify_config(cfg)?;
    cc.sweep_points = cfg.n.unwrap_or(cc.sweep_points);
    let report = kappa_sweep(id, &params, &cc)?;
    let text = match cfg.format() {
        Format::Csv => report.to_csv(),
        Format::Json => pretty(&report),
    };
    emit(cfg.out.as_deref(), &text)?;
    for row in &report.rows {
        match row.slope {
            Some(s) => eprintln!("{} -> {}: slope {s:.4}", row.deformed, row.limit),
            None => eprintln!("{} -> {}: identically zero", row.deformed, row.limit),
        }
    }
    Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail })
}

pub fn profile(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let rows = potential_profile(
        params.kappa,
        params.alpha,
        cfg.x_min.unwrap_or(-3.0),
        cfg.x_max.unwrap_or(3.0),
        cfg.n.unwrap_or(201),
    )?;
    let text = match cfg.format() {
        Format::Csv => profile_csv(&rows),
        Format::Json => pretty(&rows.iter().map(|(x, v)| json!({"x": x, "V": v})).collect::<Vec<_>>()),
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(Outcome::Pass)
}

pub fn curvature_table(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.check_tol_keys(&["oracle_step"])?;
    let params = cfg.params()?;
    let ids: Vec<MetricId> = match &cfg.metric {
        Some(m) => vec![m.parse()?],
        None => MetricId::ALL.to_vec(),
    };
    let step = cfg.tol("oracle_step", ORACLE_STEP)?;
    let n = cfg.n.unwrap_or(100);
    let mut rows = Vec::new();
    for id in ids {
        let metric = MetricDef::new(id, params.kappa)?;
        for (x, y) in metric.sample(cfg.seed.unwrap_or(0), n)? {
            let (r1212, k) = curvature(&metric, x, y)?;
            let oracle = curvature_oracle(&metric, x, y, step)?;
            rows.push((id, x, y, r1212, k, oracle));
        }
    }
    let text = match cfg.format() {
        Format::Csv => {
            let mut s = String::from("metric,x,y,R1212,K,K_oracle\n");
            for (id, x, y, r, k, o) in &rows {
                writeln!(s, "{},{x:.16e},{y:.16e},{r:.16e},{k:.16e},{o:.16e}", id.as_str()).unwrap();
            }
            s
        }
        Format::Json => pretty(
            &rows
                .iter()
                .map(|(id, x, y, r, k, o)| json!({"metric": id.as_str(), "x": x, "y": y, "R1212": r, "K": k, "K_oracle": o}))
                .collect::<Vec<_>>(),
        ),
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(Outcome::Pass)
}
