//! Forward-mode dual numbers over the four phase-space coordinates, and the
//! [`Scalar`] abstraction that lets every observable be written once and
//! evaluated either in plain `f64` or with exact first derivatives.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Value plus gradient with respect to `(q1, q2, p1, p2)`.
#[derive(Clone, Copy, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Dual {
    pub value: f64,
    pub grad: [f64; 4],
}

impl Dual {
    pub const fn constant(value: f64) -> Self {
        Dual {
            value,
            grad: [0.0; 4],
        }
    }

    /// Seed for the `slot`-th phase coordinate: unit gradient in that slot.
    pub fn seed(value: f64, slot: usize) -> Self {
        let mut grad = [0.0; 4];
        grad[slot] = 1.0;
        Dual { value, grad }
    }

    #[inline]
    fn chain(self, value: f64, deriv: f64) -> Self {
        Dual {
            value,
            grad: self.grad.map(|g| g * deriv),
        }
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + [{}, {}, {}, {}]ε",
            self.value, self.grad[0], self.grad[1], self.grad[2], self.grad[3]
        )
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, o: Dual) -> Dual {
        Dual {
            value: self.value + o.value,
            grad: [
                self.grad[0] + o.grad[0],
                self.grad[1] + o.grad[1],
                self.grad[2] + o.grad[2],
                self.grad[3] + o.grad[3],
            ],
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, o: Dual) -> Dual {
        Dual {
            value: self.value - o.value,
            grad: [
                self.grad[0] - o.grad[0],
                self.grad[1] - o.grad[1],
                self.grad[2] - o.grad[2],
                self.grad[3] - o.grad[3],
            ],
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, o: Dual) -> Dual {
        let (a, b) = (self.value, o.value);
        Dual {
            value: a * b,
            grad: [
                self.grad[0] * b + a * o.grad[0],
                self.grad[1] * b + a * o.grad[1],
                self.grad[2] * b + a * o.grad[2],
                self.grad[3] * b + a * o.grad[3],
            ],
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    #[inline]
    fn div(self, o: Dual) -> Dual {
        let inv = 1.0 / o.value;
        let value = self.value * inv;
        Dual {
            value,
            grad: [
                (self.grad[0] - value * o.grad[0]) * inv,
                (self.grad[1] - value * o.grad[1]) * inv,
                (self.grad[2] - value * o.grad[2]) * inv,
                (self.grad[3] - value * o.grad[3]) * inv,
            ],
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        Dual {
            value: -self.value,
            grad: self.grad.map(|g| -g),
        }
    }
}

impl Add<f64> for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, c: f64) -> Dual {
        Dual {
            value: self.value + c,
            grad: self.grad,
        }
    }
}

impl Sub<f64> for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, c: f64) -> Dual {
        Dual {
            value: self.value - c,
            grad: self.grad,
        }
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, c: f64) -> Dual {
        Dual {
            value: self.value * c,
            grad: self.grad.map(|g| g * c),
        }
    }
}

impl Div<f64> for Dual {
    type Output = Dual;
    #[inline]
    fn div(self, c: f64) -> Dual {
        let inv = 1.0 / c;
        self * inv
    }
}

impl AddAssign for Dual {
    fn add_assign(&mut self, o: Dual) {
        *self = *self + o;
    }
}

impl SubAssign for Dual {
    fn sub_assign(&mut self, o: Dual) {
        *self = *self - o;
    }
}

impl MulAssign for Dual {
    fn mul_assign(&mut self, o: Dual) {
        *self = *self * o;
    }
}

/// A differentiable function of one real variable given as `t -> (f(t), f'(t))`.
#[derive(Clone)]
pub struct Univariate(Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>);

impl Univariate {
    pub fn new(f: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static) -> Self {
        Univariate(Arc::new(f))
    }

    pub fn eval(&self, t: f64) -> (f64, f64) {
        (self.0)(t)
    }
}

impl fmt::Debug for Univariate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Univariate(..)")
    }
}

/// Arithmetic shared by `f64` and [`Dual`].
///
/// Fallible operations (`sqrt`, `ln`) return `Err` instead of producing NaN:
/// a negative radicand is a [`Error::DomainViolation`]; for duals a zero
/// radicand is additionally a [`Error::DerivativeSingular`].
pub trait Scalar:
    Copy
    + Send
    + Sync
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    fn value(&self) -> f64;
    fn sqrt(self) -> Result<Self>;
    fn ln(self) -> Result<Self>;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn powi(self, n: i32) -> Self;
    /// Four-quadrant arctangent of `self / x`.
    fn atan2(self, x: Self) -> Self;
    fn apply(self, f: &Univariate) -> Self;

    #[inline]
    fn sq(self) -> Self {
        self * self
    }

    #[inline]
    fn recip(self) -> Self {
        Self::cst(1.0) / self
    }
}

impl Scalar for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
    fn sqrt(self) -> Result<Self> {
        if self < 0.0 {
            return Err(Error::DomainViolation(format!("sqrt of negative value {self}")));
        }
        Ok(f64::sqrt(self))
    }
    fn ln(self) -> Result<Self> {
        if self <= 0.0 {
            return Err(Error::DomainViolation(format!("log of non-positive value {self}")));
        }
        Ok(f64::ln(self))
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline]
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    fn apply(self, f: &Univariate) -> Self {
        f.eval(self).0
    }
}

impl Scalar for Dual {
    #[inline]
    fn cst(v: f64) -> Self {
        Dual::constant(v)
    }
    #[inline]
    fn value(&self) -> f64 {
        self.value
    }
    fn sqrt(self) -> Result<Self> {
        if self.value < 0.0 {
            return Err(Error::DomainViolation(format!(
                "sqrt of negative value {}",
                self.value
            )));
        }
        if self.value == 0.0 {
            return Err(Error::DerivativeSingular("sqrt at zero".into()));
        }
        let s = self.value.sqrt();
        Ok(self.chain(s, 0.5 / s))
    }
    fn ln(self) -> Result<Self> {
        if self.value <= 0.0 {
            return Err(Error::DomainViolation(format!(
                "log of non-positive value {}",
                self.value
            )));
        }
        Ok(self.chain(self.value.ln(), 1.0 / self.value))
    }
    fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e)
    }
    fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c)
    }
    fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s)
    }
    fn powi(self, n: i32) -> Self {
        match n {
            0 => Dual::constant(1.0),
            1 => self,
            _ => self.chain(self.value.powi(n), n as f64 * self.value.powi(n - 1)),
        }
    }
    fn atan2(self, x: Self) -> Self {
        let (y0, x0) = (self.value, x.value);
        let r2 = x0 * x0 + y0 * y0;
        let mut grad = [0.0; 4];
        for (k, g) in grad.iter_mut().enumerate() {
            *g = (x0 * self.grad[k] - y0 * x.grad[k]) / r2;
        }
        Dual {
            value: y0.atan2(x0),
            grad,
        }
    }
    fn apply(self, f: &Univariate) -> Self {
        let (v, d) = f.eval(self.value);
        self.chain(v, d)
    }
}

/// Lift a phase point's components into seeded duals.
pub fn dual_lift(z: [f64; 4]) -> [Dual; 4] {
    [
        Dual::seed(z[0], 0),
        Dual::seed(z[1], 1),
        Dual::seed(z[2], 2),
        Dual::seed(z[3], 3),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeding() {
        let z = dual_lift([3.0, 0.0, 0.0, 0.0]);
        assert_eq!(z[0].value, 3.0);
        assert_eq!(z[0].grad, [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn square_and_product() {
        let z = dual_lift([3.0, 0.0, 0.0, 0.0]);
        let f = z[0] * z[0];
        assert_eq!(f.value, 9.0);
        assert_eq!(f.grad[0], 6.0);

        let z = dual_lift([2.0, 0.0, 5.0, 0.0]);
        let f = z[2] * z[0];
        assert_eq!(f.value, 10.0);
        assert_eq!(f.grad, [5.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn constants_have_no_gradient() {
        assert_eq!(Dual::cst(4.2).grad, [0.0; 4]);
    }

    #[test]
    fn sqrt_of_zero_is_singular() {
        let z = Dual::seed(0.0, 1);
        assert!(matches!(z.sqrt(), Err(Error::DerivativeSingular(_))));
        assert!(matches!(Dual::seed(-1.0, 0).sqrt(), Err(Error::DomainViolation(_))));
        assert_eq!(Scalar::sqrt(0.0_f64).unwrap(), 0.0);
    }

    #[test]
    fn atan2_gradient() {
        let z = dual_lift([1.0, 2.0, 0.0, 0.0]);
        let phi = z[1].atan2(z[0]);
        // ∂φ/∂x = -y/r², ∂φ/∂y = x/r²
        assert!((phi.grad[0] + 2.0 / 5.0).abs() < 1e-15);
        assert!((phi.grad[1] - 1.0 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn univariate_chain_rule() {
        let cube = Univariate::new(|t| (t * t * t, 3.0 * t * t));
        let z = dual_lift([2.0, 0.0, 0.0, 0.0]);
        let f = (z[0] * 2.0).apply(&cube);
        assert_eq!(f.value, 64.0);
        assert_eq!(f.grad[0], 2.0 * 3.0 * 16.0);
    }
}
