//! One-dimensional potential `V(x) = ½α²x² / (1 − κx²)`.

use crate::error::{domain, Error, Result};

/// Samples keep `1 − κx² ≥` this for κ > 0.
pub const PROFILE_MARGIN: f64 = 0.01;

pub fn potential(x: f64, kappa: f64, alpha: f64) -> Result<f64> {
    let w = 1.0 - kappa * x * x;
    if w <= 0.0 {
        return Err(domain(format!("1 - kappa x^2 = {w} must be positive")));
    }
    Ok(0.5 * alpha * alpha * x * x / w)
}

/// `n` evenly spaced `(x, V(x))` samples over `[x_min, x_max]`, clipped to
/// the interval where the potential is finite.
pub fn potential_profile(kappa: f64, alpha: f64, x_min: f64, x_max: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
        return Err(Error::Config(format!("invalid x range [{x_min}, {x_max}]")));
    }
    if n < 2 {
        return Err(Error::Config("profile needs at least two samples".into()));
    }
    if !kappa.is_finite() || !alpha.is_finite() {
        return Err(Error::InvalidParams("kappa and alpha must be finite".into()));
    }
    let (mut lo, mut hi) = (x_min, x_max);
    if kappa > 0.0 {
        let edge = ((1.0 - PROFILE_MARGIN) / kappa).sqrt();
        lo = lo.max(-edge);
        hi = hi.min(edge);
        if lo >= hi {
            return Err(Error::Config(format!(
                "range [{x_min}, {x_max}] lies outside |x| < {edge}"
            )));
        }
    }
    (0..n)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            Ok((x, potential(x, kappa, alpha)?))
        })
        .collect()
}

pub fn profile_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("x,V\n");
    for (x, v) in rows {
        out.push_str(&format!("{x:.16e},{v:.16e}\n"));
    }
    out
}
