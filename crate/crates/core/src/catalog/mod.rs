//! The catalog of superintegrable systems, keyed by stable string IDs.

mod curved;
mod deformed;
pub mod domain;
mod euclidean;
mod generic;
mod higher_order;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dual::Scalar;
use crate::error::{domain as domain_err, Error, Result};
use crate::observable::Observable;
use crate::types::{Chart, ParamSet};

pub use domain::{Constraint, Domain, SampleBox, FLOW_MARGIN, MAX_ATTEMPTS, SAMPLE_MARGIN};
pub use generic::generic_polar_system;

/// Declares a parameterised closed-form formula. The body sees the parameters
/// as `$p` and the chart components as `$z`, and may use the scalar type `T`.
macro_rules! formula {
    ($name:ident, |$p:ident, $z:ident| $body:expr) => {
        #[derive(Clone, Copy, Debug)]
        pub(crate) struct $name(pub crate::types::ParamSet);
        impl crate::observable::PhaseFunction for $name {
            #[allow(unused_variables)]
            fn eval<T: crate::dual::Scalar>(&self, $z: &[T; 4]) -> crate::error::Result<T> {
                let $p = &self.0;
                $body
            }
        }
    };
}
pub(crate) use formula;

/// Stable identifiers, part of the CLI and JSON contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemId {
    EuclidA,
    EuclidB,
    EuclidC,
    EuclidD,
    DefA,
    DefB,
    DefC,
    DefD,
    Osc1dH1,
    Osc1dH2,
    CurvedOscH1,
    CurvedOscH2,
    CurvedKeplerK1,
    CurvedKeplerK2,
    TtwDef,
    PwDef,
    /// Built by [`generic_polar_system`] only.
    GenericPolar,
}

impl SystemId {
    /// Every ID that [`build_system`] accepts.
    pub const ALL: [SystemId; 16] = [
        SystemId::EuclidA,
        SystemId::EuclidB,
        SystemId::EuclidC,
        SystemId::EuclidD,
        SystemId::DefA,
        SystemId::DefB,
        SystemId::DefC,
        SystemId::DefD,
        SystemId::Osc1dH1,
        SystemId::Osc1dH2,
        SystemId::CurvedOscH1,
        SystemId::CurvedOscH2,
        SystemId::CurvedKeplerK1,
        SystemId::CurvedKeplerK2,
        SystemId::TtwDef,
        SystemId::PwDef,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SystemId::EuclidA => "euclid_a",
            SystemId::EuclidB => "euclid_b",
            SystemId::EuclidC => "euclid_c",
            SystemId::EuclidD => "euclid_d",
            SystemId::DefA => "def_a",
            SystemId::DefB => "def_b",
            SystemId::DefC => "def_c",
            SystemId::DefD => "def_d",
            SystemId::Osc1dH1 => "osc1d_h1",
            SystemId::Osc1dH2 => "osc1d_h2",
            SystemId::CurvedOscH1 => "curved_osc_h1",
            SystemId::CurvedOscH2 => "curved_osc_h2",
            SystemId::CurvedKeplerK1 => "curved_kepler_k1",
            SystemId::CurvedKeplerK2 => "curved_kepler_k2",
            SystemId::TtwDef => "ttw_def",
            SystemId::PwDef => "pw_def",
            SystemId::GenericPolar => "generic_polar",
        }
    }

    /// Parameters the system actually reads.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            SystemId::EuclidA | SystemId::EuclidB => &["alpha", "k2", "k3"],
            SystemId::EuclidC | SystemId::EuclidD => &["k1", "k2", "k3"],
            SystemId::DefA | SystemId::DefB => &["kappa", "alpha", "k2", "k3"],
            SystemId::DefC | SystemId::DefD => &["kappa", "k1", "k2", "k3"],
            SystemId::Osc1dH1 | SystemId::Osc1dH2 => &["kappa", "alpha"],
            SystemId::CurvedOscH1 | SystemId::CurvedOscH2 => &["kappa", "alpha"],
            SystemId::CurvedKeplerK1 | SystemId::CurvedKeplerK2 => &["kappa", "g"],
            SystemId::TtwDef => &["kappa", "alpha", "ka", "kb", "m"],
            SystemId::PwDef => &["kappa", "g", "ka", "kb", "m"],
            SystemId::GenericPolar => &["kappa"],
        }
    }

    /// One-line description of where the system sits in the family.
    pub fn family(self) -> &'static str {
        match self {
            SystemId::EuclidA => "Euclidean, separable in Cartesian and polar coordinates",
            SystemId::EuclidB => "Euclidean, separable in Cartesian and parabolic coordinates",
            SystemId::EuclidC => "Euclidean, separable in polar and parabolic coordinates",
            SystemId::EuclidD => "Euclidean, separable in two parabolic systems",
            SystemId::DefA => "deformation of euclid_a, Cartesian separation",
            SystemId::DefB => "deformation of euclid_b, Cartesian and parabolic separation",
            SystemId::DefC => "deformation of euclid_c, polar and parabolic separation",
            SystemId::DefD => "deformation of euclid_d, two parabolic separations",
            SystemId::Osc1dH1 => "one-dimensional nonlinear oscillator, mass 1 - kappa x^2",
            SystemId::Osc1dH2 => "one-dimensional nonlinear oscillator, mass 1/(1 - kappa x^2)",
            SystemId::CurvedOscH1 => "oscillator on a space of constant curvature",
            SystemId::CurvedOscH2 => "oscillator on a conformally flat space",
            SystemId::CurvedKeplerK1 => "Kepler problem on a space of constant curvature",
            SystemId::CurvedKeplerK2 => "Kepler problem on a conformally flat space",
            SystemId::TtwDef => "deformed oscillator family with rational angular frequency m",
            SystemId::PwDef => "deformed Kepler family with rational angular frequency m",
            SystemId::GenericPolar => "user-supplied radial and angular functions",
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownSystem(s.to_string()))
    }
}

/// A function coded natively in a second chart, related to a listed
/// observable by `form = factor * of + offset`.
#[derive(Clone, Debug)]
pub struct AltForm {
    pub of: String,
    pub factor: f64,
    pub offset: f64,
    pub form: Observable,
}

/// The system recovered at κ = 0, with the integrals that correspond.
#[derive(Clone, Debug)]
pub struct EuclideanLimit {
    pub id: SystemId,
    pub params: ParamSet,
    /// `(deformed name, limit name)`.
    pub pairs: Vec<(String, String)>,
}

/// A Hamiltonian with its named constants of motion and domain.
#[derive(Clone, Debug)]
pub struct SystemDef {
    pub id: SystemId,
    pub params: ParamSet,
    pub hamiltonian: Observable,
    /// Ordered constants of motion. Intermediate separation constants are
    /// listed after the preferred combinations.
    pub integrals: Vec<Observable>,
    pub domain: Domain,
    pub involutive_pairs: Vec<(String, String)>,
    /// Three integrals expected to be functionally independent; `None` for
    /// one-degree-of-freedom systems.
    pub independent: Option<[String; 3]>,
    /// `H = Σ cᵢ Iᵢ` when `H` is not itself listed.
    pub hamiltonian_combination: Vec<(String, f64)>,
    pub euclidean_limit: Option<EuclideanLimit>,
    pub alt_forms: Vec<AltForm>,
}

impl SystemDef {
    pub fn chart(&self) -> Chart {
        self.hamiltonian.chart()
    }

    pub fn integral(&self, name: &str) -> Option<&Observable> {
        self.integrals.iter().find(|o| o.name() == name)
    }

    /// An integral by name, or the Hamiltonian for `"H"`.
    pub fn observable(&self, name: &str) -> Result<&Observable> {
        if name == self.hamiltonian.name() {
            return Ok(&self.hamiltonian);
        }
        self.integral(name)
            .ok_or_else(|| Error::Config(format!("{} has no observable `{name}`", self.id)))
    }

    pub fn integral_names(&self) -> Vec<String> {
        self.integrals.iter().map(|o| o.name().to_string()).collect()
    }

    /// Seeded sample of certification points (margin [`SAMPLE_MARGIN`]).
    pub fn sample(&self, seed: u64, n: usize) -> Result<Vec<crate::types::PhasePoint>> {
        self.domain.sample(seed, n)
    }
}

/// Seeded domain sample for `sys`; see [`Domain::sample`].
pub fn domain_sample(sys: &SystemDef, seed: u64, n: usize) -> Result<Vec<crate::types::PhasePoint>> {
    sys.sample(seed, n)
}

/// Construct a catalog system.
pub fn build_system(id: SystemId, params: &ParamSet) -> Result<SystemDef> {
    params.validate()?;
    let p = *params;
    match id {
        SystemId::EuclidA => Ok(euclidean::euclid_a(p)),
        SystemId::EuclidB => Ok(euclidean::euclid_b(p)),
        SystemId::EuclidC => Ok(euclidean::euclid_c(p)),
        SystemId::EuclidD => Ok(euclidean::euclid_d(p)),
        SystemId::DefA => Ok(deformed::def_a(p)),
        SystemId::DefB => Ok(deformed::def_b(p)),
        SystemId::DefC => Ok(deformed::def_c(p)),
        SystemId::DefD => Ok(deformed::def_d(p)),
        SystemId::Osc1dH1 => Ok(curved::osc1d(p, false)),
        SystemId::Osc1dH2 => Ok(curved::osc1d(p, true)),
        SystemId::CurvedOscH1 => Ok(curved::curved_osc_h1(p)),
        SystemId::CurvedOscH2 => Ok(curved::curved_osc_h2(p)),
        SystemId::CurvedKeplerK1 => Ok(curved::curved_kepler_k1(p)),
        SystemId::CurvedKeplerK2 => Ok(curved::curved_kepler_k2(p)),
        SystemId::TtwDef => higher_order::ttw_def(p),
        SystemId::PwDef => higher_order::pw_def(p),
        SystemId::GenericPolar => Err(Error::InvalidParams(
            "generic_polar needs radial and angular functions; use generic_polar_system".into(),
        )),
    }
}

/// Convenience wrapper parsing the ID.
pub fn build_system_by_name(id: &str, params: &ParamSet) -> Result<SystemDef> {
    build_system(id.parse()?, params)
}

// Shared formula helpers.

#[inline]
pub(crate) fn c<T: Scalar>(v: f64) -> T {
    T::cst(v)
}

/// Angular momentum `x p_y − y p_x`.
#[inline]
pub(crate) fn ang<T: Scalar>(z: &[T; 4]) -> T {
    z[0] * z[3] - z[1] * z[2]
}

#[inline]
pub(crate) fn p2<T: Scalar>(z: &[T; 4]) -> T {
    z[2] * z[2] + z[3] * z[3]
}

#[inline]
pub(crate) fn radius<T: Scalar>(z: &[T; 4]) -> Result<T> {
    (z[0] * z[0] + z[1] * z[1]).sqrt()
}

/// Require `v > 0`; the deformation factors change sign at the domain edge.
#[inline]
pub(crate) fn positive<T: Scalar>(v: T, what: &str) -> Result<T> {
    if v.value() > 0.0 {
        Ok(v)
    } else {
        Err(domain_err(format!("{what} = {} must be positive", v.value())))
    }
}

/// `(r + x, r − x)` without cancellation.
pub(crate) fn r_plus_minus<T: Scalar>(x: T, y: T, r: T) -> (T, T) {
    if x.value() >= 0.0 {
        let rp = r + x;
        (rp, y * y / rp)
    } else {
        let rm = r - x;
        (y * y / rm, rm)
    }
}

/// `k · v`, but exactly zero when `k = 0` so switched-off barriers stay finite on their singular lines.
#[inline]
pub(crate) fn barrier<T: Scalar>(k: f64, v: impl FnOnce() -> T) -> T {
    if k == 0.0 {
        T::cst(0.0)
    } else {
        v() * k
    }
}

pub(crate) fn pair(a: &str, b: &str) -> (String, String) {
    (a.to_string(), b.to_string())
}

/// Default sampling box for Cartesian-native systems.
pub(crate) fn cartesian_box(kappa: f64, disk: bool, shift: bool) -> SampleBox {
    let mut half = 2.0;
    if disk && kappa > 0.0 {
        half = f64::min(half, 1.0 / kappa.sqrt());
    }
    if shift && kappa > 0.0 {
        half = f64::max(half, kappa + 2.0);
    }
    SampleBox::cartesian(half, 1.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::PhasePoint;

    #[test]
    fn ids_round_trip() {
        for id in SystemId::ALL {
            assert_eq!(id.as_str().parse::<SystemId>().unwrap(), id);
        }
        assert!(matches!(
            "def_z".parse::<SystemId>(),
            Err(Error::UnknownSystem(_))
        ));
    }

    #[test]
    fn every_system_builds_and_evaluates() {
        for id in SystemId::ALL {
            let p = ParamSet::default().with_kappa(0.1);
            let sys = build_system(id, &p).unwrap();
            assert_eq!(sys.id, id);
            let pts = sys.sample(3, 20).unwrap();
            for pt in &pts {
                assert!(sys.domain.contains(pt));
                sys.hamiltonian.evaluate(pt).unwrap();
                for i in &sys.integrals {
                    crate::coords::evaluate_in_chart(i, pt).unwrap();
                }
            }
            let mut names = sys.integral_names();
            names.sort();
            names.dedup();
            assert_eq!(names.len(), sys.integrals.len(), "{id}: duplicate names");
        }
    }

    #[test]
    fn hamiltonian_reproducible_from_integrals() {
        for id in SystemId::ALL {
            let sys = build_system(id, &ParamSet::default().with_kappa(0.2)).unwrap();
            let listed = sys.integrals.iter().any(|o| o.name() == sys.hamiltonian.name());
            assert!(
                listed || !sys.hamiltonian_combination.is_empty(),
                "{id}: H neither listed nor reproducible"
            );
            for pt in sys.sample(11, 50).unwrap() {
                if sys.hamiltonian_combination.is_empty() {
                    continue;
                }
                let h = sys.hamiltonian.evaluate(&pt).unwrap();
                let mut sum = 0.0;
                for (name, coeff) in &sys.hamiltonian_combination {
                    let obs = sys.observable(name).unwrap();
                    sum += coeff * crate::coords::evaluate_in_chart(obs, &pt).unwrap();
                }
                assert!((h - sum).abs() <= 1e-12 * h.abs().max(1.0), "{id}: {h} vs {sum}");
            }
        }
    }

    #[test]
    fn domain_margins_from_the_catalog() {
        let def_a = build_system(SystemId::DefA, &ParamSet::default().with_kappa(1.0)).unwrap();
        for pt in def_a.sample(1, 300).unwrap() {
            assert!(pt.q1().powi(2) + pt.q2().powi(2) <= 0.95 + 1e-15);
        }
        let def_c = build_system(SystemId::DefC, &ParamSet::default().with_kappa(0.5)).unwrap();
        for pt in def_c.sample(1, 300).unwrap() {
            assert!(pt.q1().hypot(pt.q2()) >= 0.55 - 1e-15);
        }
    }

    #[test]
    fn outside_domain_is_rejected() {
        let sys = build_system(SystemId::DefA, &ParamSet::default().with_kappa(1.0)).unwrap();
        let outside = PhasePoint::cartesian(0.9, 0.9, 0.1, 0.1).unwrap();
        assert!(!sys.domain.contains(&outside));
        assert!(matches!(
            sys.hamiltonian.evaluate(&outside),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn generic_polar_is_not_buildable_by_id() {
        assert!(build_system(SystemId::GenericPolar, &ParamSet::default()).is_err());
    }
}
