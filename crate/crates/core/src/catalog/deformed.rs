//! κ-deformations of the four flat systems. Each Hamiltonian is the product
//! `λ(κ) · H` of a deformation factor and the flat Hamiltonian.

use std::f64::consts::SQRT_2;

use super::euclidean::{axis_constraints, HamA, HamB, HamC, HamD, IntA1, IntA2, IntA3, IntB2, IntC2};
use super::{
    ang, barrier, c, cartesian_box, formula, p2, pair, positive, r_plus_minus, radius, AltForm, Constraint, Domain,
    EuclideanLimit, SystemDef, SystemId,
};
use crate::observable::{Degree, Observable, PhaseFunction};
use crate::types::{Chart, ParamSet};

const Q2: Degree = Degree::Polynomial(2);

fn obs<F: PhaseFunction + 'static>(name: &str, chart: Chart, f: F) -> Observable {
    Observable::new(name, chart, Q2, f)
}

// ---- (a): factor 1/(1 − κr²) ----

formula!(DefAHam, |p, z| {
    let w = positive(c::<T>(1.0) - (z[0] * z[0] + z[1] * z[1]) * p.kappa, "1 - kappa r^2")?;
    Ok(HamA(*p).eval(z)? / w)
});

formula!(DefAJ1, |p, z| {
    let h = DefAHam(*p).eval(z)?;
    Ok(IntA1(*p).eval(z)? + h * z[0] * z[0] * (2.0 * p.kappa))
});

formula!(DefAJ2, |p, z| {
    let h = DefAHam(*p).eval(z)?;
    Ok(IntA2(*p).eval(z)? + h * z[1] * z[1] * (2.0 * p.kappa))
});

formula!(DefAHamPolar, |p, z| {
    let [r, phi, pr, pphi] = *z;
    let r2 = r * r;
    let w = positive(c::<T>(1.0) - r2 * p.kappa, "1 - kappa r^2")?;
    let flat = (pr * pr + pphi * pphi / r2) * 0.5
        + r2 * (0.5 * p.alpha * p.alpha)
        + barrier(p.k2, || (r2 * phi.cos().sq()).recip())
        + barrier(p.k3, || (r2 * phi.sin().sq()).recip());
    Ok(flat / w)
});

formula!(DefAJ3Polar, |p, z| {
    let [_, phi, _, pphi] = *z;
    Ok(pphi * pphi + barrier(2.0 * p.k2, || phi.cos().sq().recip()) + barrier(2.0 * p.k3, || phi.sin().sq().recip()))
});

pub(super) fn def_a(p: ParamSet) -> SystemDef {
    let cart = Chart::Cartesian;
    SystemDef {
        id: SystemId::DefA,
        params: p,
        hamiltonian: obs("H", cart, DefAHam(p)),
        integrals: vec![
            obs("J_a1", cart, DefAJ1(p)),
            obs("J_a2", cart, DefAJ2(p)),
            obs("J_a3", cart, IntA3(p)),
        ],
        domain: Domain::new(
            [axis_constraints(p.k3, p.k2), vec![Constraint::DiskInterior { kappa: p.kappa }]].concat(),
            cartesian_box(p.kappa, true, false),
        ),
        involutive_pairs: vec![pair("J_a1", "J_a2")],
        independent: Some(["J_a1".into(), "J_a2".into(), "J_a3".into()]),
        hamiltonian_combination: vec![("J_a1".into(), 0.5), ("J_a2".into(), 0.5)],
        euclidean_limit: Some(EuclideanLimit {
            id: SystemId::EuclidA,
            params: p.with_kappa(0.0),
            pairs: vec![
                pair("H", "H"),
                pair("J_a1", "I_a1"),
                pair("J_a2", "I_a2"),
                pair("J_a3", "I_a3"),
            ],
        }),
        alt_forms: vec![
            AltForm {
                of: "H".into(),
                factor: 1.0,
                offset: 0.0,
                form: obs("H", Chart::Polar, DefAHamPolar(p)),
            },
            AltForm {
                of: "J_a3".into(),
                factor: 1.0,
                offset: 2.0 * (p.k2 + p.k3),
                form: obs("J_a3", Chart::Polar, DefAJ3Polar(p)),
            },
        ],
    }
}

// ---- (b): factor 1/(1 − κx) ----

formula!(DefBHam, |p, z| {
    let w = positive(c::<T>(1.0) - z[0] * p.kappa, "1 - kappa x")?;
    Ok(HamB(*p).eval(z)? / w)
});

formula!(DefBJ1, |p, z| {
    let x = z[0];
    let h = DefBHam(*p).eval(z)?;
    Ok(z[2] * z[2] + x * x * (4.0 * p.alpha * p.alpha) + x * (2.0 * p.k3) + x * h * (2.0 * p.kappa))
});

formula!(DefBJ3, |p, z| {
    let [x, y, _, py] = *z;
    let k = p.kappa;
    let w = positive(c::<T>(1.0) - x * k, "1 - kappa x")?;
    let y2 = y * y;
    let potential = -(y2 * (x * 4.0 + y2 * k)) * (0.25 * p.alpha * p.alpha)
        + barrier(p.k2, || (x * 4.0 - (x * x * 4.0 + y2) * k) / (y2 * 2.0))
        - y2 * (0.5 * p.k3);
    Ok(ang(z) * py - y2 * p2(z) * k / (w * 4.0) + potential / w)
});

formula!(DefBHamParabolic, |p, z| {
    let [a, b, pa, pb] = *z;
    let (a2, b2) = (a * a, b * b);
    let s = a2 + b2;
    let w = positive(c::<T>(1.0) - (a2 - b2) * p.kappa, "1 - kappa x")?;
    let flat = (pa * pa + pb * pb) / (s * 8.0)
        + (a2 * a2 * a2 + b2 * b2 * b2) / s * (2.0 * p.alpha * p.alpha)
        + barrier(p.k2, || (a2 * b2 * 4.0).recip())
        + (a2 - b2) * p.k3;
    Ok(flat / w)
});

formula!(DefBJ3Parabolic, |p, z| {
    let [a, _, pa, _] = *z;
    let a2 = a * a;
    let h = DefBHamParabolic(*p).eval(z)?;
    Ok(pa * pa
        + a2 * a2 * a2 * (16.0 * p.alpha * p.alpha)
        + barrier(2.0 * p.k2, || a2.recip())
        + a2 * a2 * (8.0 * p.k3)
        - (a2 - a2 * a2 * p.kappa) * h * 8.0)
});

pub(super) fn def_b(p: ParamSet) -> SystemDef {
    let cart = Chart::Cartesian;
    SystemDef {
        id: SystemId::DefB,
        params: p,
        hamiltonian: obs("H", cart, DefBHam(p)),
        integrals: vec![
            obs("J_b1", cart, DefBJ1(p)),
            obs("J_b2", cart, IntB2(p)),
            obs("J_b3", cart, DefBJ3(p)),
        ],
        domain: Domain::new(
            [axis_constraints(p.k2, 0.0), vec![Constraint::HalfPlaneShift { kappa: p.kappa }]].concat(),
            cartesian_box(p.kappa, true, false),
        ),
        involutive_pairs: vec![pair("J_b1", "J_b2")],
        independent: Some(["J_b1".into(), "J_b2".into(), "J_b3".into()]),
        hamiltonian_combination: vec![("J_b1".into(), 0.5), ("J_b2".into(), 0.5)],
        euclidean_limit: Some(EuclideanLimit {
            id: SystemId::EuclidB,
            params: p.with_kappa(0.0),
            pairs: vec![
                pair("H", "H"),
                pair("J_b1", "I_b1"),
                pair("J_b2", "I_b2"),
                pair("J_b3", "I_b3"),
            ],
        }),
        alt_forms: vec![
            AltForm {
                of: "H".into(),
                factor: 1.0,
                offset: 0.0,
                form: obs("H", Chart::Parabolic, DefBHamParabolic(p)),
            },
            AltForm {
                of: "J_b3".into(),
                factor: -4.0,
                offset: 0.0,
                form: obs("J_b3", Chart::Parabolic, DefBJ3Parabolic(p)),
            },
        ],
    }
}

// ---- (c): factor r/(r − κ) ----

formula!(DefCHam, |p, z| {
    let r = radius(z)?;
    let s = positive(r - p.kappa, "r - kappa")?;
    Ok(r / s * HamC(*p).eval(z)?)
});

formula!(DefCJ3, |p, z| {
    let [x, y, px, py] = *z;
    let k = p.kappa;
    let r = radius(z)?;
    let s = positive(r - k, "r - kappa")?;
    let y2 = y * y;
    let kinetic = r * ang(z) * py + (x * px * px - x * py * py + y * px * py * 2.0) * (0.5 * k);
    let potential = x * p.k1
        + barrier(p.k2, || x / y2 * (r * 2.0 - k))
        + barrier(p.k3, || (x * x * 2.0 + y2 - r * k) / y2);
    Ok((kinetic + potential) / s)
});

formula!(DefCHamPolar, |p, z| {
    let [r, phi, pr, pphi] = *z;
    let s = positive(r - p.kappa, "r - kappa")?;
    let flat = (pr * pr + pphi * pphi / (r * r)) * 0.5
        + r.recip() * p.k1
        + barrier(p.k2, || (r * r * phi.sin().sq()).recip())
        + barrier(p.k3, || phi.cos() / (r * r * phi.sin().sq()));
    Ok(r / s * flat)
});

formula!(DefCJ2Polar, |p, z| {
    let [_, phi, _, pphi] = *z;
    Ok(pphi * pphi + barrier(2.0 * p.k2, || phi.sin().sq().recip()) + barrier(2.0 * p.k3, || phi.cos() / phi.sin().sq()))
});

formula!(DefCHamParabolic, |p, z| {
    let [a, b, pa, pb] = *z;
    let (a2, b2) = (a * a, b * b);
    let s = positive(a2 + b2 - p.kappa, "r - kappa")?;
    let num = (pa * pa + pb * pb) * 0.125
        + p.k1
        + barrier(p.k2 - p.k3, || (a2 * 4.0).recip())
        + barrier(p.k2 + p.k3, || (b2 * 4.0).recip());
    Ok(num / s)
});

formula!(DefCJ3a, |p, z| {
    let [a, _, pa, _] = *z;
    let h = DefCHamParabolic(*p).eval(z)?;
    Ok(pa * pa + 4.0 * p.k1 + barrier(2.0 * (p.k2 - p.k3), || (a * a).recip()) - a * a * h * 8.0)
});

formula!(DefCJ3b, |p, z| {
    let [_, b, _, pb] = *z;
    let h = DefCHamParabolic(*p).eval(z)?;
    Ok(pb * pb + 4.0 * p.k1 + barrier(2.0 * (p.k2 + p.k3), || (b * b).recip()) - b * b * h * 8.0)
});

formula!(DefCJ3Parabolic, |p, z| {
    Ok(DefCJ3a(*p).eval(z)? + DefCHamParabolic(*p).eval(z)? * (4.0 * p.kappa))
});

pub(super) fn def_c(p: ParamSet) -> SystemDef {
    let cart = Chart::Cartesian;
    let par = Chart::Parabolic;
    SystemDef {
        id: SystemId::DefC,
        params: p,
        hamiltonian: obs("H", cart, DefCHam(p)),
        integrals: vec![
            obs("H", cart, DefCHam(p)),
            obs("J_c2", cart, IntC2(p)),
            obs("J_c3", cart, DefCJ3(p)),
            obs("J_c3a", par, DefCJ3a(p)),
            obs("J_c3b", par, DefCJ3b(p)),
        ],
        domain: Domain::new(
            [
                axis_constraints(p.k2.abs() + p.k3.abs(), 0.0),
                vec![Constraint::AwayFromOrigin, Constraint::OutsideShift { kappa: p.kappa }],
            ]
            .concat(),
            cartesian_box(p.kappa, false, true),
        ),
        involutive_pairs: vec![pair("J_c3a", "J_c3b")],
        independent: Some(["H".into(), "J_c2".into(), "J_c3".into()]),
        hamiltonian_combination: Vec::new(),
        euclidean_limit: Some(EuclideanLimit {
            id: SystemId::EuclidC,
            params: p.with_kappa(0.0),
            pairs: vec![pair("H", "H"), pair("J_c2", "I_c2"), pair("J_c3", "I_c3")],
        }),
        alt_forms: vec![
            AltForm {
                of: "H".into(),
                factor: 1.0,
                offset: 0.0,
                form: obs("H", Chart::Polar, DefCHamPolar(p)),
            },
            AltForm {
                of: "H".into(),
                factor: 1.0,
                offset: 0.0,
                form: obs("H", par, DefCHamParabolic(p)),
            },
            AltForm {
                of: "J_c2".into(),
                factor: 1.0,
                offset: 2.0 * p.k2,
                form: obs("J_c2", Chart::Polar, DefCJ2Polar(p)),
            },
            AltForm {
                of: "J_c3".into(),
                factor: -4.0,
                offset: 0.0,
                form: obs("J_c3", par, DefCJ3Parabolic(p)),
            },
        ],
    }
}

// ---- (d): factor r/(r − κ), upper half plane ----

formula!(DefDHam, |p, z| {
    let r = radius(z)?;
    let s = positive(r - p.kappa, "r - kappa")?;
    Ok(r / s * HamD(*p).eval(z)?)
});

formula!(DefDJ2, |p, z| {
    let [x, y, px, py] = *z;
    let k = p.kappa;
    let r = radius(z)?;
    let s = positive(r - k, "r - kappa")?;
    let (rp, rm) = r_plus_minus(x, y, r);
    let (sp, sm) = (rp.sqrt()?, rm.sqrt()?);
    let kinetic = r * ang(z) * py + (x * px * px - x * py * py + y * px * py * 2.0) * (0.5 * k);
    let potential = x * p.k1 - (y * sm - sp * k) * p.k2 + (y * sp - sm * k) * p.k3;
    Ok((kinetic + potential) / s)
});

formula!(DefDJ3, |p, z| {
    let [x, y, px, py] = *z;
    let k = p.kappa;
    let r = radius(z)?;
    let s = positive(r - k, "r - kappa")?;
    let (rp, rm) = r_plus_minus(x, y, r);
    let (sp, sm) = (rp.sqrt()?, rm.sqrt()?);
    let kinetic = r * ang(z) * px + (y * px * px - y * py * py - x * px * py * 2.0) * (0.5 * k);
    let potential = -(y * p.k1) - (x + k) * sm * p.k2 + (x - k) * sp * p.k3;
    Ok((kinetic + potential) / s)
});

formula!(DefDHamParabolic, |p, z| {
    let [a, b, pa, pb] = *z;
    let s = positive(a * a + b * b - p.kappa, "r - kappa")?;
    let num = (pa * pa + pb * pb) * 0.125 + p.k1 + a * (SQRT_2 * p.k2) + b * (SQRT_2 * p.k3);
    Ok(num / s)
});

formula!(DefDJ2a, |p, z| {
    let [a, _, pa, _] = *z;
    let h = DefDHamParabolic(*p).eval(z)?;
    Ok(pa * pa + 4.0 * p.k1 + a * (8.0 * SQRT_2 * p.k2) - a * a * h * 8.0)
});

formula!(DefDJ2b, |p, z| {
    let [_, b, _, pb] = *z;
    let h = DefDHamParabolic(*p).eval(z)?;
    Ok(pb * pb + 4.0 * p.k1 + b * (8.0 * SQRT_2 * p.k3) - b * b * h * 8.0)
});

formula!(DefDJ2Parabolic, |p, z| {
    Ok(DefDJ2a(*p).eval(z)? + DefDHamParabolic(*p).eval(z)? * (4.0 * p.kappa))
});

formula!(DefDHamRotated, |p, z| {
    let [al, be, pal, pbe] = *z;
    let s = positive(al * al + be * be - p.kappa, "r - kappa")?;
    let num = (pal * pal + pbe * pbe) * 0.125 + p.k1 + (al + be) * p.k2 + (al - be) * p.k3;
    Ok(num / s)
});

formula!(DefDJ3a, |p, z| {
    let [al, _, pal, _] = *z;
    let h = DefDHamRotated(*p).eval(z)?;
    Ok(pal * pal + 4.0 * p.k1 + al * (8.0 * (p.k2 + p.k3)) - al * al * h * 8.0)
});

formula!(DefDJ3b, |p, z| {
    let [_, be, _, pbe] = *z;
    let h = DefDHamRotated(*p).eval(z)?;
    Ok(pbe * pbe + 4.0 * p.k1 + be * (8.0 * (p.k2 - p.k3)) - be * be * h * 8.0)
});

formula!(DefDJ3Rotated, |p, z| {
    Ok(DefDJ3a(*p).eval(z)? + DefDHamRotated(*p).eval(z)? * (4.0 * p.kappa))
});

pub(super) fn def_d(p: ParamSet) -> SystemDef {
    let cart = Chart::Cartesian;
    let par = Chart::Parabolic;
    let rot = Chart::ParabolicRotated;
    SystemDef {
        id: SystemId::DefD,
        params: p,
        hamiltonian: obs("H", cart, DefDHam(p)),
        integrals: vec![
            obs("H", cart, DefDHam(p)),
            obs("J_d2", cart, DefDJ2(p)),
            obs("J_d3", cart, DefDJ3(p)),
            obs("J_d2a", par, DefDJ2a(p)),
            obs("J_d2b", par, DefDJ2b(p)),
            obs("J_d3a", rot, DefDJ3a(p)),
            obs("J_d3b", rot, DefDJ3b(p)),
        ],
        domain: Domain::new(
            vec![
                Constraint::UpperHalfPlane,
                Constraint::AwayFromOrigin,
                Constraint::OutsideShift { kappa: p.kappa },
            ],
            cartesian_box(p.kappa, false, true),
        ),
        involutive_pairs: vec![pair("J_d2a", "J_d2b"), pair("J_d3a", "J_d3b")],
        independent: Some(["H".into(), "J_d2".into(), "J_d3".into()]),
        hamiltonian_combination: Vec::new(),
        euclidean_limit: Some(EuclideanLimit {
            id: SystemId::EuclidD,
            params: p.with_kappa(0.0),
            pairs: vec![pair("H", "H"), pair("J_d2", "I_d2"), pair("J_d3", "I_d3")],
        }),
        alt_forms: vec![
            AltForm {
                of: "H".into(),
                factor: 1.0,
                offset: 0.0,
                form: obs("H", par, DefDHamParabolic(p)),
            },
            AltForm {
                of: "H".into(),
                factor: 1.0,
                offset: 0.0,
                form: obs("H", rot, DefDHamRotated(p)),
            },
            AltForm {
                of: "J_d2".into(),
                factor: -4.0,
                offset: 0.0,
                form: obs("J_d2", par, DefDJ2Parabolic(p)),
            },
            AltForm {
                of: "J_d3".into(),
                factor: 4.0,
                offset: 0.0,
                form: obs("J_d3", rot, DefDJ3Rotated(p)),
            },
        ],
    }
}

/// The deformed `(a)` system with the centrifugal terms switched off.
pub(super) fn def_a_without_barriers(p: ParamSet) -> SystemDef {
    let mut q = p;
    q.k2 = 0.0;
    q.k3 = 0.0;
    def_a(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::evaluate_in_chart;

    #[test]
    fn alt_forms_match_their_targets() {
        let p = ParamSet {
            kappa: 0.2,
            alpha: 0.8,
            k1: -0.7,
            k2: 0.6,
            k3: 0.3,
            ..ParamSet::default()
        };
        for sys in [def_a(p), def_b(p), def_c(p), def_d(p)] {
            for pt in sys.sample(5, 40).unwrap() {
                for alt in &sys.alt_forms {
                    let target = evaluate_in_chart(sys.observable(&alt.of).unwrap(), &pt).unwrap();
                    let got = evaluate_in_chart(&alt.form, &pt).unwrap();
                    let want = alt.factor * target + alt.offset;
                    assert!(
                        (got - want).abs() <= 1e-11 * want.abs().max(1.0),
                        "{} {}: {got} vs {want}",
                        sys.id,
                        alt.of
                    );
                }
            }
        }
    }

    #[test]
    fn separation_constants_sum_to_hamiltonian_multiple() {
        let p = ParamSet::default().with_kappa(0.3);
        let sys = def_c(p);
        for pt in sys.sample(9, 30).unwrap() {
            let a = evaluate_in_chart(sys.integral("J_c3a").unwrap(), &pt).unwrap();
            let b = evaluate_in_chart(sys.integral("J_c3b").unwrap(), &pt).unwrap();
            let h = sys.hamiltonian.evaluate(&pt).unwrap();
            assert!((a + b + 8.0 * 0.3 * h).abs() < 1e-11 * h.abs().max(1.0));
        }
    }
}
