//! Oscillators and Kepler problems with position-dependent mass or on curved
//! spaces, in one and two dimensions.

use super::deformed::def_a_without_barriers;
use super::{
    ang, c, cartesian_box, formula, p2, pair, positive, radius, AltForm, Constraint, Domain, EuclideanLimit,
    SampleBox, SystemDef, SystemId,
};
use crate::observable::{Degree, Observable, PhaseFunction};
use crate::types::{Chart, ParamSet};

const Q2: Degree = Degree::Polynomial(2);

fn obs<F: PhaseFunction + 'static>(name: &str, chart: Chart, f: F) -> Observable {
    Observable::new(name, chart, Q2, f)
}

formula!(Osc1dMassVarying, |p, z| {
    let [x, _, px, _] = *z;
    let w = positive(c::<T>(1.0) - x * x * p.kappa, "1 - kappa x^2")?;
    Ok(w * px * px * 0.5 + x * x / w * (0.5 * p.alpha * p.alpha))
});

formula!(Osc1dMassInverse, |p, z| {
    let [x, _, px, _] = *z;
    let w = positive(c::<T>(1.0) - x * x * p.kappa, "1 - kappa x^2")?;
    Ok((px * px + x * x * (p.alpha * p.alpha)) / w * 0.5)
});

/// One degree of freedom; `y` and `p_y` are inert.
pub(super) fn osc1d(p: ParamSet, inverse_mass: bool) -> SystemDef {
    let (id, h) = if inverse_mass {
        (SystemId::Osc1dH2, obs("H", Chart::Cartesian, Osc1dMassInverse(p)))
    } else {
        (SystemId::Osc1dH1, obs("H", Chart::Cartesian, Osc1dMassVarying(p)))
    };
    SystemDef {
        id,
        params: p,
        hamiltonian: h.clone(),
        integrals: vec![h],
        domain: Domain::new(
            vec![Constraint::IntervalInterior { kappa: p.kappa }],
            cartesian_box(p.kappa, true, false),
        ),
        involutive_pairs: Vec::new(),
        independent: None,
        hamiltonian_combination: Vec::new(),
        euclidean_limit: Some(EuclideanLimit {
            id,
            params: p.with_kappa(0.0),
            pairs: vec![pair("H", "H")],
        }),
        alt_forms: Vec::new(),
    }
}

formula!(CurvedOscHam, |p, z| {
    let w = positive(c::<T>(1.0) - (z[0] * z[0] + z[1] * z[1]) * p.kappa, "1 - kappa r^2")?;
    let l = ang(z);
    Ok((w * p2(z) + l * l * p.kappa) * 0.5 + (z[0] * z[0] + z[1] * z[1]) / w * (0.5 * p.alpha * p.alpha))
});

formula!(CurvedOscI11, |p, z| {
    let x = z[0];
    let w = positive(c::<T>(1.0) - (x * x + z[1] * z[1]) * p.kappa, "1 - kappa r^2")?;
    Ok(w * z[2] * z[2] + x * x / w * (p.alpha * p.alpha))
});

formula!(CurvedOscI22, |p, z| {
    let y = z[1];
    let w = positive(c::<T>(1.0) - (z[0] * z[0] + y * y) * p.kappa, "1 - kappa r^2")?;
    Ok(w * z[3] * z[3] + y * y / w * (p.alpha * p.alpha))
});

formula!(AngularMomentumSq, |p, z| {
    let l = ang(z);
    Ok(l * l)
});

formula!(CurvedOscHamPolar, |p, z| {
    let [r, _, pr, pphi] = *z;
    let r2 = r * r;
    let w = positive(c::<T>(1.0) - r2 * p.kappa, "1 - kappa r^2")?;
    Ok((w * pr * pr + pphi * pphi / r2) * 0.5 + r2 / w * (0.5 * p.alpha * p.alpha))
});

fn flat_oscillator(p: ParamSet) -> ParamSet {
    let mut q = p.with_kappa(0.0);
    q.k2 = 0.0;
    q.k3 = 0.0;
    q
}

pub(super) fn curved_osc_h1(p: ParamSet) -> SystemDef {
    let cart = Chart::Cartesian;
    SystemDef {
        id: SystemId::CurvedOscH1,
        params: p,
        hamiltonian: obs("H", cart, CurvedOscHam(p)),
        integrals: vec![
            obs("I11", cart, CurvedOscI11(p)),
            obs("I22", cart, CurvedOscI22(p)),
            obs("L2", cart, AngularMomentumSq(p)),
        ],
        domain: Domain::new(
            vec![Constraint::DiskInterior { kappa: p.kappa }],
            cartesian_box(p.kappa, true, false),
        ),
        involutive_pairs: Vec::new(),
        independent: Some(["I11".into(), "I22".into(), "L2".into()]),
        hamiltonian_combination: vec![
            ("I11".into(), 0.5),
            ("I22".into(), 0.5),
            ("L2".into(), 0.5 * p.kappa),
        ],
        euclidean_limit: Some(EuclideanLimit {
            id: SystemId::EuclidA,
            params: flat_oscillator(p),
            pairs: vec![
                pair("H", "H"),
                pair("I11", "I_a1"),
                pair("I22", "I_a2"),
                pair("L2", "I_a3"),
            ],
        }),
        alt_forms: vec![AltForm {
            of: "H".into(),
            factor: 1.0,
            offset: 0.0,
            form: obs("H", Chart::Polar, CurvedOscHamPolar(p)),
        }],
    }
}

/// Identical to `def_a` without the centrifugal barriers.
pub(super) fn curved_osc_h2(p: ParamSet) -> SystemDef {
    let mut sys = def_a_without_barriers(p);
    sys.id = SystemId::CurvedOscH2;
    sys.params = p;
    if let Some(limit) = sys.euclidean_limit.as_mut() {
        limit.params = flat_oscillator(p);
    }
    sys
}

formula!(KeplerK1Ham, |p, z| {
    let r = radius(z)?;
    let w = positive(c::<T>(1.0) - r * r * p.kappa, "1 - kappa r^2")?;
    let l = ang(z);
    Ok((w * p2(z) + l * l * p.kappa) * 0.5 - w.sqrt()? / r * p.g)
});

formula!(KeplerK1R1, |p, z| {
    let r = radius(z)?;
    let w = positive(c::<T>(1.0) - r * r * p.kappa, "1 - kappa r^2")?;
    Ok(w.sqrt()? * z[3] * ang(z) - z[0] / r * p.g)
});

formula!(KeplerK1R2, |p, z| {
    let r = radius(z)?;
    let w = positive(c::<T>(1.0) - r * r * p.kappa, "1 - kappa r^2")?;
    Ok(-(w.sqrt()? * z[2] * ang(z)) - z[1] / r * p.g)
});

formula!(KeplerK1HamPolar, |p, z| {
    let [r, _, pr, pphi] = *z;
    let w = positive(c::<T>(1.0) - r * r * p.kappa, "1 - kappa r^2")?;
    Ok((w * pr * pr + pphi * pphi / (r * r)) * 0.5 - w.sqrt()? / r * p.g)
});

fn flat_kepler(p: ParamSet) -> ParamSet {
    let mut q = p.with_kappa(0.0);
    q.k1 = -p.g;
    q.k2 = 0.0;
    q.k3 = 0.0;
    q
}

pub(super) fn curved_kepler_k1(p: ParamSet) -> SystemDef {
    let cart = Chart::Cartesian;
    SystemDef {
        id: SystemId::CurvedKeplerK1,
        params: p,
        hamiltonian: obs("H", cart, KeplerK1Ham(p)),
        integrals: vec![
            obs("H", cart, KeplerK1Ham(p)),
            obs("L2", cart, AngularMomentumSq(p)),
            obs("R1", cart, KeplerK1R1(p)),
            obs("R2", cart, KeplerK1R2(p)),
        ],
        domain: Domain::new(
            vec![Constraint::AwayFromOrigin, Constraint::DiskInterior { kappa: p.kappa }],
            cartesian_box(p.kappa, true, false),
        ),
        involutive_pairs: Vec::new(),
        independent: Some(["H".into(), "L2".into(), "R1".into()]),
        hamiltonian_combination: Vec::new(),
        euclidean_limit: Some(EuclideanLimit {
            id: SystemId::EuclidC,
            params: flat_kepler(p),
            pairs: vec![pair("H", "H"), pair("L2", "I_c2"), pair("R1", "I_c3")],
        }),
        alt_forms: vec![AltForm {
            of: "H".into(),
            factor: 1.0,
            offset: 0.0,
            form: obs("H", Chart::Polar, KeplerK1HamPolar(p)),
        }],
    }
}

formula!(KeplerK2Ham, |p, z| {
    let r = radius(z)?;
    let s = positive(r - p.kappa, "r - kappa")?;
    Ok((r * p2(z) * 0.5 - p.g) / s)
});

formula!(KeplerK2J2, |p, z| {
    let [x, y, px, py] = *z;
    let r = radius(z)?;
    let s = positive(r - p.kappa, "r - kappa")?;
    let quad = (x * px * px - x * py * py + y * px * py * 2.0) * (0.5 * p.kappa);
    Ok((r * ang(z) * py - x * p.g + quad) / s)
});

formula!(KeplerK2J3, |p, z| {
    let [x, y, px, py] = *z;
    let r = radius(z)?;
    let s = positive(r - p.kappa, "r - kappa")?;
    let quad = (y * px * px - y * py * py - x * px * py * 2.0) * (0.5 * p.kappa);
    Ok((r * ang(z) * px + y * p.g + quad) / s)
});

formula!(KeplerK2HamPolar, |p, z| {
    let [r, _, pr, pphi] = *z;
    let s = positive(r - p.kappa, "r - kappa")?;
    Ok((r * (pr * pr + pphi * pphi / (r * r)) * 0.5 - p.g) / s)
});

pub(super) fn curved_kepler_k2(p: ParamSet) -> SystemDef {
    let cart = Chart::Cartesian;
    let mut box_ = cartesian_box(p.kappa, false, true);
    if p.kappa > 0.0 {
        box_ = SampleBox::cartesian(p.kappa + 2.0, 1.5);
    }
    SystemDef {
        id: SystemId::CurvedKeplerK2,
        params: p,
        hamiltonian: obs("H", cart, KeplerK2Ham(p)),
        integrals: vec![
            obs("H", cart, KeplerK2Ham(p)),
            obs("J2", cart, KeplerK2J2(p)),
            obs("J3", cart, KeplerK2J3(p)),
        ],
        domain: Domain::new(
            vec![Constraint::AwayFromOrigin, Constraint::OutsideShift { kappa: p.kappa }],
            box_,
        ),
        involutive_pairs: Vec::new(),
        independent: Some(["H".into(), "J2".into(), "J3".into()]),
        hamiltonian_combination: Vec::new(),
        euclidean_limit: Some(EuclideanLimit {
            id: SystemId::EuclidC,
            params: flat_kepler(p),
            pairs: vec![pair("H", "H"), pair("J2", "I_c3")],
        }),
        alt_forms: vec![AltForm {
            of: "H".into(),
            factor: 1.0,
            offset: 0.0,
            form: obs("H", Chart::Polar, KeplerK2HamPolar(p)),
        }],
    }
}
