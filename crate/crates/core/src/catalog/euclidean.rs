//! The four flat-space superintegrable systems with quadratic integrals.

use super::{ang, barrier, c, cartesian_box, formula, p2, r_plus_minus, radius, Constraint, Domain, SystemDef, SystemId};
use crate::observable::{Degree, Observable};
use crate::types::{Chart, ParamSet};

const Q2: Degree = Degree::Polynomial(2);

formula!(HamA, |p, z| {
    let [x, y, _, _] = *z;
    Ok(p2(z) * 0.5
        + (x * x + y * y) * (0.5 * p.alpha * p.alpha)
        + barrier(p.k2, || (x * x).recip())
        + barrier(p.k3, || (y * y).recip()))
});

formula!(IntA1, |p, z| {
    let x = z[0];
    Ok(z[2] * z[2] + x * x * (p.alpha * p.alpha) + barrier(2.0 * p.k2, || (x * x).recip()))
});

formula!(IntA2, |p, z| {
    let y = z[1];
    Ok(z[3] * z[3] + y * y * (p.alpha * p.alpha) + barrier(2.0 * p.k3, || (y * y).recip()))
});

// Shared by the deformed system: the angular integral does not depend on κ.
formula!(IntA3, |p, z| {
    let [x, y, _, _] = *z;
    let l = ang(z);
    Ok(l * l + barrier(2.0 * p.k2, || (y / x).sq()) + barrier(2.0 * p.k3, || (x / y).sq()))
});

formula!(HamB, |p, z| {
    let [x, y, _, _] = *z;
    Ok(p2(z) * 0.5
        + (x * x * 4.0 + y * y) * (0.5 * p.alpha * p.alpha)
        + barrier(p.k2, || (y * y).recip())
        + x * p.k3)
});

formula!(IntB1, |p, z| {
    let x = z[0];
    Ok(z[2] * z[2] + x * x * (4.0 * p.alpha * p.alpha) + x * (2.0 * p.k3))
});

// Shared by the deformed system.
formula!(IntB2, |p, z| {
    let y = z[1];
    Ok(z[3] * z[3] + y * y * (p.alpha * p.alpha) + barrier(2.0 * p.k2, || (y * y).recip()))
});

formula!(IntB3, |p, z| {
    let [x, y, _, py] = *z;
    Ok(ang(z) * py - x * y * y * (p.alpha * p.alpha) + barrier(2.0 * p.k2, || x / (y * y))
        - y * y * (0.5 * p.k3))
});

formula!(HamC, |p, z| {
    let [x, y, _, _] = *z;
    let r = radius(z)?;
    Ok(p2(z) * 0.5 + r.recip() * p.k1 + barrier(p.k2, || (y * y).recip()) + barrier(p.k3, || x / (y * y * r)))
});

// Shared by the deformed system.
formula!(IntC2, |p, z| {
    let [x, y, _, _] = *z;
    let r = radius(z)?;
    let l = ang(z);
    Ok(l * l + barrier(2.0 * p.k2, || x * x / (y * y)) + barrier(2.0 * p.k3, || x * r / (y * y)))
});

formula!(IntC3, |p, z| {
    let [x, y, _, py] = *z;
    let r = radius(z)?;
    Ok(ang(z) * py
        + x / r * p.k1
        + barrier(2.0 * p.k2, || x / (y * y))
        + barrier(p.k3, || (x * x * 2.0 + y * y) / (y * y * r)))
});

formula!(HamD, |p, z| {
    let [x, y, _, _] = *z;
    let r = radius(z)?;
    let (rp, rm) = r_plus_minus(x, y, r);
    Ok(p2(z) * 0.5 + (c::<T>(p.k1) + rp.sqrt()? * p.k2 + rm.sqrt()? * p.k3) / r)
});

formula!(IntD2, |p, z| {
    let [x, y, _, py] = *z;
    let r = radius(z)?;
    let (rp, rm) = r_plus_minus(x, y, r);
    Ok(ang(z) * py + (x * p.k1 - y * rm.sqrt()? * p.k2 + y * rp.sqrt()? * p.k3) / r)
});

formula!(IntD3, |p, z| {
    let [x, y, px, _] = *z;
    let r = radius(z)?;
    let (rp, rm) = r_plus_minus(x, y, r);
    Ok(ang(z) * px + (-(y * p.k1) - x * rm.sqrt()? * p.k2 + x * rp.sqrt()? * p.k3) / r)
});

fn obs<F: crate::observable::PhaseFunction + 'static>(name: &str, f: F) -> Observable {
    Observable::new(name, Chart::Cartesian, Q2, f)
}

fn flat(id: SystemId, p: ParamSet, h: Observable, integrals: Vec<Observable>, constraints: Vec<Constraint>) -> SystemDef {
    let names: Vec<String> = integrals.iter().map(|o| o.name().to_string()).collect();
    SystemDef {
        id,
        params: p,
        hamiltonian: h,
        integrals,
        domain: Domain::new(constraints, cartesian_box(0.0, false, false)),
        involutive_pairs: Vec::new(),
        independent: Some([names[0].clone(), names[1].clone(), names[2].clone()]),
        hamiltonian_combination: Vec::new(),
        euclidean_limit: None,
        alt_forms: Vec::new(),
    }
}

/// Exclusions for barriers on the `x` axis (coefficient `on_x_axis`) and on
/// the `y` axis; switched-off barriers need none.
pub(super) fn axis_constraints(on_x_axis: f64, on_y_axis: f64) -> Vec<Constraint> {
    let mut out = Vec::new();
    if on_x_axis != 0.0 {
        out.push(Constraint::AwayFromXAxis);
    }
    if on_y_axis != 0.0 {
        out.push(Constraint::AwayFromYAxis);
    }
    out
}

pub(super) fn euclid_a(p: ParamSet) -> SystemDef {
    let mut sys = flat(
        SystemId::EuclidA,
        p,
        obs("H", HamA(p)),
        vec![obs("I_a1", IntA1(p)), obs("I_a2", IntA2(p)), obs("I_a3", IntA3(p))],
        axis_constraints(p.k3, p.k2),
    );
    sys.involutive_pairs = vec![super::pair("I_a1", "I_a2")];
    sys.hamiltonian_combination = vec![("I_a1".into(), 0.5), ("I_a2".into(), 0.5)];
    sys
}

pub(super) fn euclid_b(p: ParamSet) -> SystemDef {
    let mut sys = flat(
        SystemId::EuclidB,
        p,
        obs("H", HamB(p)),
        vec![obs("I_b1", IntB1(p)), obs("I_b2", IntB2(p)), obs("I_b3", IntB3(p))],
        axis_constraints(p.k2, 0.0),
    );
    sys.involutive_pairs = vec![super::pair("I_b1", "I_b2")];
    sys.hamiltonian_combination = vec![("I_b1".into(), 0.5), ("I_b2".into(), 0.5)];
    sys
}

pub(super) fn euclid_c(p: ParamSet) -> SystemDef {
    flat(
        SystemId::EuclidC,
        p,
        obs("H", HamC(p)),
        vec![obs("H", HamC(p)), obs("I_c2", IntC2(p)), obs("I_c3", IntC3(p))],
        [axis_constraints(p.k2.abs() + p.k3.abs(), 0.0), vec![Constraint::AwayFromOrigin]].concat(),
    )
}

pub(super) fn euclid_d(p: ParamSet) -> SystemDef {
    flat(
        SystemId::EuclidD,
        p,
        obs("H", HamD(p)),
        vec![obs("H", HamD(p)), obs("I_d2", IntD2(p)), obs("I_d3", IntD3(p))],
        vec![Constraint::UpperHalfPlane, Constraint::AwayFromOrigin],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::PhasePoint;

    #[test]
    fn hand_values() {
        let p = ParamSet::default();
        let pt = PhasePoint::cartesian(1.0, 2.0, 0.5, -1.0).unwrap();
        let a = euclid_a(p);
        // 0.5*(0.25+1) + 0.5*5 + 1 + 0.25
        assert!((a.hamiltonian.evaluate(&pt).unwrap() - 4.375).abs() < 1e-15);
        // L = 1*(-1) - 2*0.5 = -2 → 4 + 2*4 + 2*0.25
        let i3 = a.integral("I_a3").unwrap().evaluate(&pt).unwrap();
        assert!((i3 - 12.5).abs() < 1e-14);
    }

    #[test]
    fn d_uses_stable_square_roots() {
        let p = ParamSet::default();
        let d = euclid_d(p);
        let x = 1.0;
        let y = 1e-4;
        let pt = PhasePoint::cartesian(x, y, 0.0, 0.0).unwrap();
        let r: f64 = x.hypot(y);
        let exact = (1.0 + (r + x).sqrt() + (y * y / (r + x)).sqrt()) / r;
        assert!((d.hamiltonian.evaluate(&pt).unwrap() - exact).abs() < 1e-14);
    }
}
