//! Polar-separable Hamiltonians built from user-supplied radial and angular
//! functions.

use super::{Constraint, Domain, SampleBox, SystemDef, SystemId};
use crate::dual::{Scalar, Univariate};
use crate::error::{domain, Result};
use crate::observable::{Degree, Observable, PhaseFunction};
use crate::types::{Chart, ParamSet};

#[derive(Clone, Debug)]
struct GenericHam {
    radial: Univariate,
    angular: Univariate,
    kappa: f64,
}

impl PhaseFunction for GenericHam {
    fn eval<T: Scalar>(&self, z: &[T; 4]) -> Result<T> {
        let [r, phi, pr, pphi] = *z;
        let r2 = r * r;
        let w = r2 * -self.kappa + 1.0;
        if w.value() <= 0.0 {
            return Err(domain(format!("1 - kappa r^2 = {} must be positive", w.value())));
        }
        Ok((pr * pr + pphi * pphi / r2 + r.apply(&self.radial) + phi.apply(&self.angular) / r2) / w * 0.5)
    }
}

#[derive(Clone, Debug)]
struct GenericJ {
    angular: Univariate,
}

impl PhaseFunction for GenericJ {
    fn eval<T: Scalar>(&self, z: &[T; 4]) -> Result<T> {
        Ok(z[3] * z[3] + z[1].apply(&self.angular))
    }
}

/// `H = [p_r² + p_φ²/r² + A(r) + B(φ)/r²] / (2(1 − κr²))` with integral
/// `J = p_φ² + B(φ)`. Any frequency factor belongs inside `A`.
pub fn generic_polar_system(radial: Univariate, angular: Univariate, kappa: f64) -> SystemDef {
    let h = Observable::new(
        "H",
        Chart::Polar,
        Degree::Polynomial(2),
        GenericHam {
            radial,
            angular: angular.clone(),
            kappa,
        },
    );
    let j = Observable::new("J", Chart::Polar, Degree::Polynomial(2), GenericJ { angular });
    let r_hi = if kappa > 0.0 { f64::min(2.0, 1.0 / kappa.sqrt()) } else { 2.0 };
    SystemDef {
        id: SystemId::GenericPolar,
        params: ParamSet::default().with_kappa(kappa),
        hamiltonian: h.clone(),
        integrals: vec![h, j],
        domain: Domain::new(
            vec![Constraint::AwayFromOrigin, Constraint::DiskInterior { kappa }],
            SampleBox::polar(0.05, r_hi, 1.5),
        ),
        involutive_pairs: Vec::new(),
        independent: None,
        hamiltonian_combination: Vec::new(),
        euclidean_limit: None,
        alt_forms: Vec::new(),
    }
}
