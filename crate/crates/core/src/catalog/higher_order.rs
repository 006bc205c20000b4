//! Families with one quadratic integral from polar separation and a
//! higher-order complex constant.

use super::{c, formula, pair, AltForm, Constraint, Domain, EuclideanLimit, SampleBox, SystemDef, SystemId};
use crate::error::Result;
use crate::factorization::{build_constant, f_m_generic, Family};
use crate::observable::{Degree, Observable, PhaseFunction};
use crate::types::{Chart, ParamSet};

formula!(TtwHam, |p, z| Ok(TtwJ1(*p).eval(z)? * 0.5));

formula!(TtwJ1, |p, z| {
    let [r, phi, pr, pphi] = *z;
    let r2 = r * r;
    let w = super::positive(c::<T>(1.0) - r2 * p.kappa, "1 - kappa r^2")?;
    let f = f_m_generic(phi, p.m.to_f64(), p.ka, p.kb)?;
    Ok((pr * pr + pphi * pphi / r2 + r2 * (p.alpha * p.alpha) + f / r2) / w)
});

formula!(TtwJ2, |p, z| {
    let f = f_m_generic(z[1], p.m.to_f64(), p.ka, p.kb)?;
    Ok(z[3] * z[3] + f)
});

formula!(PwHam, |p, z| Ok(PwJ1(*p).eval(z)? * 0.5));

formula!(PwJ1, |p, z| {
    let [r, phi, pr, pphi] = *z;
    let s = super::positive(r - p.kappa, "r - kappa")?;
    let f = f_m_generic(phi, p.m.to_f64(), p.ka, p.kb)?;
    Ok((r * (pr * pr + pphi * pphi / (r * r)) - p.g * 2.0 + f * 2.0 / r) / s)
});

formula!(PwJ2, |p, z| {
    let f = f_m_generic(z[1], p.m.to_f64(), p.ka, p.kb)?;
    Ok(z[3] * z[3] + f * 2.0)
});

fn obs<F: PhaseFunction + 'static>(name: &str, f: F) -> Observable {
    Observable::new(name, Chart::Polar, Degree::Polynomial(2), f)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    id: SystemId,
    family: Family,
    p: ParamSet,
    h: Observable,
    j1: Observable,
    j2: Observable,
    constraints: Vec<Constraint>,
    sample_box: SampleBox,
) -> Result<SystemDef> {
    let k = build_constant(family, &p)?;
    let names = ["H", "J1", "J2", "ReK", "ImK"];
    Ok(SystemDef {
        id,
        params: p,
        hamiltonian: h,
        integrals: vec![j1, j2, k.re_k, k.im_k],
        domain: Domain::new(constraints, sample_box),
        involutive_pairs: vec![pair("J1", "J2")],
        independent: Some(["J1".into(), "J2".into(), "ReK".into()]),
        hamiltonian_combination: vec![("J1".into(), 0.5)],
        euclidean_limit: Some(EuclideanLimit {
            id,
            params: p.with_kappa(0.0),
            pairs: names.iter().map(|n| pair(n, n)).collect(),
        }),
        alt_forms: Vec::<AltForm>::new(),
    })
}

pub(super) fn ttw_def(p: ParamSet) -> Result<SystemDef> {
    let m = p.m.to_f64();
    let r_hi = if p.kappa > 0.0 { f64::min(2.0, 1.0 / p.kappa.sqrt()) } else { 2.0 };
    assemble(
        SystemId::TtwDef,
        Family::Oscillator,
        p,
        obs("H", TtwHam(p)),
        obs("J1", TtwJ1(p)),
        obs("J2", TtwJ2(p)),
        vec![
            Constraint::AwayFromOrigin,
            Constraint::DiskInterior { kappa: p.kappa },
            Constraint::AngularPoles { m },
        ],
        SampleBox::polar(0.05, r_hi, 1.5),
    )
}

pub(super) fn pw_def(p: ParamSet) -> Result<SystemDef> {
    let m = p.m.to_f64();
    let r_hi = if p.kappa > 0.0 { p.kappa + 2.0 } else { 2.0 };
    assemble(
        SystemId::PwDef,
        Family::Kepler,
        p,
        obs("H", PwHam(p)),
        obs("J1", PwJ1(p)),
        obs("J2", PwJ2(p)),
        vec![
            Constraint::AwayFromOrigin,
            Constraint::OutsideShift { kappa: p.kappa },
            Constraint::AngularPoles { m },
        ],
        SampleBox::polar(0.05, r_hi, 1.5),
    )
}
