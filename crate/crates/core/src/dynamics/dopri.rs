//! Dormand–Prince 5(4) with embedded error control. The field is autonomous,
//! so the stage times are not needed.

use super::vector_field;
use crate::error::Result;
use crate::observable::Observable;

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights (equal to the last row of `A`).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
/// Fourth-order embedded weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Tolerances of the adaptive stepper.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

/// Attempt one step; returns the fifth-order solution and the scaled error norm.
pub(super) fn try_step(h_obs: &Observable, z: &[f64; 4], dt: f64, tol: &Tolerance) -> Result<([f64; 4], f64)> {
    let mut k = [[0.0; 4]; 7];
    k[0] = vector_field(h_obs, z)?;
    for s in 1..7 {
        let mut y = *z;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..4 {
                    y[i] += dt * a * kj[i];
                }
            }
        }
        k[s] = vector_field(h_obs, &y)?;
    }
    let mut y5 = *z;
    let mut err = 0.0f64;
    for i in 0..4 {
        let mut d5 = 0.0;
        let mut d4 = 0.0;
        for s in 0..7 {
            d5 += B5[s] * k[s][i];
            d4 += B4[s] * k[s][i];
        }
        y5[i] += dt * d5;
        let sc = tol.abs + tol.rel * z[i].abs().max(y5[i].abs());
        err = err.max((dt * (d5 - d4)).abs() / sc);
    }
    Ok((y5, err))
}

/// Next step size from the error norm of the last attempt.
pub(super) fn next_step(dt: f64, err: f64) -> f64 {
    let factor = if err == 0.0 { 5.0 } else { 0.9 * err.powf(-0.2) };
    dt * factor.clamp(0.2, 5.0)
}
