//! Canonical transformations between the four charts.
//!
//! Coordinates map by the point transformation; momenta by the cotangent
//! lift, so brackets `{Q_i, P_j} = δ_ij` are preserved. All maps are generic
//! over [`Scalar`], which lets an observable native to one chart be pulled
//! back to another with exact derivatives.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::dual::Scalar;
use crate::error::{Error, Result};
use crate::observable::Observable;
use crate::types::{Chart, PhasePoint};

fn singular(from: Chart, to: Chart, reason: impl Into<String>) -> Error {
    Error::SingularTransform {
        from,
        to,
        reason: reason.into(),
    }
}

fn cartesian_to_polar<T: Scalar>(z: &[T; 4]) -> Result<[T; 4]> {
    let [x, y, px, py] = *z;
    let r2 = x * x + y * y;
    if r2.value() == 0.0 {
        return Err(singular(Chart::Cartesian, Chart::Polar, "origin"));
    }
    let r = r2
        .sqrt()
        .map_err(|e| singular(Chart::Cartesian, Chart::Polar, e.to_string()))?;
    Ok([r, y.atan2(x), (x * px + y * py) / r, x * py - y * px])
}

fn polar_to_cartesian<T: Scalar>(z: &[T; 4]) -> Result<[T; 4]> {
    let [r, phi, pr, pphi] = *z;
    if r.value() <= 0.0 {
        return Err(singular(Chart::Polar, Chart::Cartesian, "r ≤ 0"));
    }
    let (c, s) = (phi.cos(), phi.sin());
    Ok([r * c, r * s, c * pr - s * pphi / r, s * pr + c * pphi / r])
}

fn cartesian_to_parabolic<T: Scalar>(z: &[T; 4]) -> Result<[T; 4]> {
    let [x, y, px, py] = *z;
    let err = |m: String| singular(Chart::Cartesian, Chart::Parabolic, m);
    let r = (x * x + y * y).sqrt().map_err(|e| err(e.to_string()))?;
    // r + x cancels for x < 0; use y²/(r − x) there
    let half = if x.value() >= 0.0 {
        (r + x) / 2.0
    } else {
        y * y / ((r - x) * 2.0)
    };
    if half.value() <= 0.0 || (y.value() == 0.0 && x.value() <= 0.0) {
        return Err(err("cut along the non-positive x axis (a > 0 branch)".into()));
    }
    let a = half.sqrt().map_err(|e| err(e.to_string()))?;
    let b = y / (a * 2.0);
    Ok([a, b, (a * px + b * py) * 2.0, (a * py - b * px) * 2.0])
}

fn parabolic_to_cartesian<T: Scalar>(z: &[T; 4]) -> Result<[T; 4]> {
    let [a, b, pa, pb] = *z;
    let s = a * a + b * b;
    if s.value() == 0.0 {
        return Err(singular(Chart::Parabolic, Chart::Cartesian, "(a, b) = (0, 0)"));
    }
    let d = s * 2.0;
    Ok([
        a * a - b * b,
        a * b * 2.0,
        (a * pa - b * pb) / d,
        (b * pa + a * pb) / d,
    ])
}

// The rotation (a, b) ↔ (α, β) is orthogonal and symmetric, hence its own inverse.
fn rotate<T: Scalar>(z: &[T; 4]) -> [T; 4] {
    let [u, v, pu, pv] = *z;
    [
        (u + v) * FRAC_1_SQRT_2,
        (u - v) * FRAC_1_SQRT_2,
        (pu + pv) * FRAC_1_SQRT_2,
        (pu - pv) * FRAC_1_SQRT_2,
    ]
}

fn to_cartesian<T: Scalar>(from: Chart, z: &[T; 4]) -> Result<[T; 4]> {
    match from {
        Chart::Cartesian => Ok(*z),
        Chart::Polar => polar_to_cartesian(z),
        Chart::Parabolic => parabolic_to_cartesian(z),
        Chart::ParabolicRotated => parabolic_to_cartesian(&rotate(z)),
    }
}

fn from_cartesian<T: Scalar>(to: Chart, z: &[T; 4]) -> Result<[T; 4]> {
    match to {
        Chart::Cartesian => Ok(*z),
        Chart::Polar => cartesian_to_polar(z),
        Chart::Parabolic => cartesian_to_parabolic(z),
        Chart::ParabolicRotated => cartesian_to_parabolic(z).map(|w| rotate(&w)),
    }
}

/// Map raw chart components from one chart to another.
pub fn transform<T: Scalar>(from: Chart, to: Chart, z: &[T; 4]) -> Result<[T; 4]> {
    match (from, to) {
        _ if from == to => Ok(*z),
        (Chart::Parabolic, Chart::ParabolicRotated) | (Chart::ParabolicRotated, Chart::Parabolic) => {
            Ok(rotate(z))
        }
        _ => {
            let c = to_cartesian(from, z)?;
            from_cartesian(to, &c)
        }
    }
}

/// Express `point` in `target` coordinates.
pub fn to_chart(point: &PhasePoint, target: Chart) -> Result<PhasePoint> {
    let z = transform(point.chart(), target, &point.as_array())?;
    PhasePoint::from_array(target, z).map_err(|e| singular(point.chart(), target, e.to_string()))
}

/// Evaluate `obs` at `point` after transforming the point to the observable's chart.
pub fn evaluate_in_chart(obs: &Observable, point: &PhasePoint) -> Result<f64> {
    let p = to_chart(point, obs.chart())?;
    obs.evaluate(&p)
}

/// Cartesian position `(x, y)` of any phase point.
pub fn position_xy(point: &PhasePoint) -> Result<(f64, f64)> {
    let c = to_cartesian(point.chart(), &point.as_array())?;
    Ok((c[0], c[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabolic_to_cartesian_example() {
        let p = PhasePoint::new(Chart::Parabolic, 1.0, 1.0, 2.0, -2.0).unwrap();
        let c = to_chart(&p, Chart::Cartesian).unwrap();
        let z = c.as_array();
        assert!((z[0] - 0.0).abs() < 1e-15);
        assert!((z[1] - 2.0).abs() < 1e-15);
        assert!((z[2] - 1.0).abs() < 1e-15);
        assert!(z[3].abs() < 1e-15);
    }

    #[test]
    fn cotangent_lift_example() {
        let c = PhasePoint::cartesian(0.0, 2.0, 1.0, 0.0).unwrap();
        let p = to_chart(&c, Chart::Parabolic).unwrap().as_array();
        assert!((p[0] - 1.0).abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-15);
        assert!((p[2] - 2.0).abs() < 1e-14);
        assert!((p[3] + 2.0).abs() < 1e-14);
    }

    #[test]
    fn polar_round_trip() {
        let c = PhasePoint::cartesian(-0.7, 1.3, 0.4, -2.2).unwrap();
        let back = to_chart(&to_chart(&c, Chart::Polar).unwrap(), Chart::Cartesian).unwrap();
        for (u, v) in c.as_array().iter().zip(back.as_array()) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn all_charts_round_trip() {
        let c = PhasePoint::cartesian(0.3, 0.8, -1.1, 0.6).unwrap();
        for from in Chart::ALL {
            for to in Chart::ALL {
                let p = to_chart(&c, from).unwrap();
                let q = to_chart(&to_chart(&p, to).unwrap(), from).unwrap();
                for (u, v) in p.as_array().iter().zip(q.as_array()) {
                    assert!((u - v).abs() < 1e-12, "{from} -> {to}");
                }
            }
        }
    }

    #[test]
    fn singular_sets() {
        let origin = PhasePoint::cartesian(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            to_chart(&origin, Chart::Polar),
            Err(Error::SingularTransform { .. })
        ));
        let neg_axis = PhasePoint::cartesian(-1.0, 0.0, 1.0, 1.0).unwrap();
        assert!(to_chart(&neg_axis, Chart::Parabolic).is_err());
        assert!(to_chart(&neg_axis, Chart::Polar).is_ok());
    }
}
