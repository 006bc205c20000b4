//! Implicit midpoint rule with a simplified Newton iteration.

use nalgebra::{Matrix4, Vector4};

use super::vector_field;
use crate::error::{Error, Result};
use crate::observable::Observable;

/// Newton settings for the implicit stage.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            tol: 1e-13,
            max_iters: 50,
        }
    }
}

/// Jacobian of the Hamiltonian vector field by central differences of the
/// exact gradient.
fn field_jacobian(h: &Observable, z: &[f64; 4]) -> Result<Matrix4<f64>> {
    let mut jac = Matrix4::zeros();
    for k in 0..4 {
        let eps = 1e-6 * z[k].abs().max(1.0);
        let (mut zp, mut zm) = (*z, *z);
        zp[k] += eps;
        zm[k] -= eps;
        let (fp, fm) = (vector_field(h, &zp)?, vector_field(h, &zm)?);
        for i in 0..4 {
            jac[(i, k)] = (fp[i] - fm[i]) / (2.0 * eps);
        }
    }
    Ok(jac)
}

fn inf_norm(v: &[f64; 4]) -> f64 {
    v.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
}

/// One step `z₁ = z₀ + dt·f((z₀ + z₁)/2)`. Negative `dt` runs the flow backwards.
pub fn midpoint_step(h: &Observable, z0: &[f64; 4], dt: f64, newton: &NewtonConfig, time: f64) -> Result<[f64; 4]> {
    let f0 = vector_field(h, z0)?;
    let mut z1 = [0.0; 4];
    for i in 0..4 {
        z1[i] = z0[i] + dt * f0[i];
    }
    // Frozen Jacobian of G(Z) = Z − z₀ − dt·f((z₀+Z)/2): I − (dt/2)·Df.
    let lu = {
        let df = field_jacobian(h, z0)?;
        let g = Matrix4::identity() - df * (0.5 * dt);
        let lu = g.lu();
        if lu.determinant().abs() < 1e-12 {
            None
        } else {
            Some(lu)
        }
    };
    let scale = inf_norm(z0).max(1.0);
    let mut last = f64::INFINITY;
    for _ in 0..newton.max_iters {
        let mut mid = [0.0; 4];
        for i in 0..4 {
            mid[i] = 0.5 * (z0[i] + z1[i]);
        }
        let fm = vector_field(h, &mid)?;
        let mut resid = [0.0; 4];
        for i in 0..4 {
            resid[i] = z1[i] - z0[i] - dt * fm[i];
        }
        let delta: [f64; 4] = match &lu {
            Some(lu) => match lu.solve(&Vector4::from(resid)) {
                Some(d) => [d[0], d[1], d[2], d[3]],
                None => resid,
            },
            None => resid,
        };
        for i in 0..4 {
            z1[i] -= delta[i];
        }
        last = inf_norm(&delta);
        if last <= newton.tol * scale {
            return Ok(z1);
        }
        if !last.is_finite() {
            break;
        }
    }
    Err(Error::NewtonDivergence {
        time,
        residual: last,
    })
}
