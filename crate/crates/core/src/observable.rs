//! Scalar functions on phase space.
//!
//! An [`Observable`] is closed-form code native to one chart. Formulas are
//! written once against [`Scalar`] through the [`PhaseFunction`] trait and
//! can then be evaluated in `f64` or in [`Dual`] arithmetic for exact
//! gradients.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coords;
use crate::dual::{dual_lift, Dual, Scalar};
use crate::error::{Error, Result};
use crate::types::{Chart, PhasePoint};

/// A formula over the four chart components `(q1, q2, p1, p2)`.
pub trait PhaseFunction: Send + Sync {
    fn eval<T: Scalar>(&self, z: &[T; 4]) -> Result<T>;
}

/// Polynomial degree in the momenta, as metadata.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degree {
    Polynomial(u32),
    NonPolynomial,
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Polynomial(d) => write!(f, "{d}"),
            Degree::NonPolynomial => f.write_str("non-polynomial"),
        }
    }
}

trait Expr: Send + Sync {
    fn eval_f64(&self, z: &[f64; 4]) -> Result<f64>;
    fn eval_dual(&self, z: &[Dual; 4]) -> Result<Dual>;
}

struct Closed<F>(F);

impl<F: PhaseFunction> Expr for Closed<F> {
    fn eval_f64(&self, z: &[f64; 4]) -> Result<f64> {
        self.0.eval(z)
    }
    fn eval_dual(&self, z: &[Dual; 4]) -> Result<Dual> {
        self.0.eval(z)
    }
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Sub,
    Mul,
}

struct Binary {
    op: BinOp,
    lhs: Arc<dyn Expr>,
    rhs: Arc<dyn Expr>,
}

impl Binary {
    fn combine<T: Scalar>(&self, a: T, b: T) -> T {
        match self.op {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
        }
    }
}

impl Expr for Binary {
    fn eval_f64(&self, z: &[f64; 4]) -> Result<f64> {
        Ok(self.combine(self.lhs.eval_f64(z)?, self.rhs.eval_f64(z)?))
    }
    fn eval_dual(&self, z: &[Dual; 4]) -> Result<Dual> {
        Ok(self.combine(self.lhs.eval_dual(z)?, self.rhs.eval_dual(z)?))
    }
}

/// `scale * inner + offset`
struct Affine {
    inner: Arc<dyn Expr>,
    scale: f64,
    offset: f64,
}

impl Expr for Affine {
    fn eval_f64(&self, z: &[f64; 4]) -> Result<f64> {
        Ok(self.inner.eval_f64(z)? * self.scale + self.offset)
    }
    fn eval_dual(&self, z: &[Dual; 4]) -> Result<Dual> {
        Ok(self.inner.eval_dual(z)? * self.scale + self.offset)
    }
}

struct Pullback {
    inner: Arc<dyn Expr>,
    native: Chart,
    from: Chart,
}

impl Expr for Pullback {
    fn eval_f64(&self, z: &[f64; 4]) -> Result<f64> {
        let w = coords::transform(self.from, self.native, z)?;
        self.inner.eval_f64(&w)
    }
    fn eval_dual(&self, z: &[Dual; 4]) -> Result<Dual> {
        let w = coords::transform(self.from, self.native, z)?;
        self.inner.eval_dual(&w)
    }
}

struct Coordinate(usize);

impl PhaseFunction for Coordinate {
    fn eval<T: Scalar>(&self, z: &[T; 4]) -> Result<T> {
        Ok(z[self.0])
    }
}

/// A named scalar function of a phase point.
#[derive(Clone)]
pub struct Observable {
    name: String,
    chart: Chart,
    degree: Degree,
    expr: Arc<dyn Expr>,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable")
            .field("name", &self.name)
            .field("chart", &self.chart)
            .field("degree", &self.degree)
            .finish_non_exhaustive()
    }
}

impl Observable {
    pub fn new<F: PhaseFunction + 'static>(
        name: impl Into<String>,
        chart: Chart,
        degree: Degree,
        f: F,
    ) -> Self {
        Observable {
            name: name.into(),
            chart,
            degree,
            expr: Arc::new(Closed(f)),
        }
    }

    /// The `k`-th chart component as an observable (`0..2` coordinates, `2..4` momenta).
    pub fn coordinate(chart: Chart, k: usize) -> Self {
        assert!(k < 4, "phase-space slot out of range");
        let names = ["q1", "q2", "p1", "p2"];
        let degree = Degree::Polynomial(if k >= 2 { 1 } else { 0 });
        Observable::new(names[k], chart, degree, Coordinate(k))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_degree(mut self, degree: Degree) -> Self {
        self.degree = degree;
        self
    }

    fn check_chart(&self, point: &PhasePoint) -> Result<()> {
        if point.chart() != self.chart {
            return Err(Error::ChartMismatch {
                expected: self.chart,
                found: point.chart(),
            });
        }
        Ok(())
    }

    /// Real-valued evaluation.
    pub fn evaluate(&self, point: &PhasePoint) -> Result<f64> {
        self.check_chart(point)?;
        self.eval_raw(&point.as_array())
    }

    /// Evaluation on raw chart components, skipping the chart check.
    pub fn eval_raw(&self, z: &[f64; 4]) -> Result<f64> {
        let v = self.expr.eval_f64(z)?;
        if !v.is_finite() {
            return Err(Error::DomainViolation(format!(
                "{} is not finite at {z:?}",
                self.name
            )));
        }
        Ok(v)
    }

    /// Evaluation on caller-seeded duals.
    pub fn eval_dual(&self, z: &[Dual; 4]) -> Result<Dual> {
        let v = self.expr.eval_dual(z)?;
        if !v.value.is_finite() {
            return Err(Error::DomainViolation(format!(
                "{} is not finite",
                self.name
            )));
        }
        if v.grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::DerivativeSingular(format!(
                "gradient of {} is not finite",
                self.name
            )));
        }
        Ok(v)
    }

    /// Value together with the exact gradient at `point`.
    pub fn value_and_gradient(&self, point: &PhasePoint) -> Result<Dual> {
        self.check_chart(point)?;
        self.eval_dual(&dual_lift(point.as_array()))
    }

    /// Exact gradient `(∂q1, ∂q2, ∂p1, ∂p2)`.
    pub fn gradient(&self, point: &PhasePoint) -> Result<[f64; 4]> {
        Ok(self.value_and_gradient(point)?.grad)
    }

    /// Gradient on raw chart components, skipping the chart check.
    pub fn gradient_raw(&self, z: &[f64; 4]) -> Result<[f64; 4]> {
        Ok(self.eval_dual(&dual_lift(*z))?.grad)
    }

    /// The same function expressed in another chart, via the canonical transform.
    pub fn in_chart(&self, chart: Chart) -> Observable {
        if chart == self.chart {
            return self.clone();
        }
        Observable {
            name: self.name.clone(),
            chart,
            degree: self.degree,
            expr: Arc::new(Pullback {
                inner: self.expr.clone(),
                native: self.chart,
                from: chart,
            }),
        }
    }

    fn binary(&self, op: BinOp, other: &Observable, sym: &str) -> Observable {
        let rhs = other.in_chart(self.chart);
        let degree = match (op, self.degree, other.degree) {
            (BinOp::Mul, Degree::Polynomial(a), Degree::Polynomial(b)) => Degree::Polynomial(a + b),
            (_, Degree::Polynomial(a), Degree::Polynomial(b)) => Degree::Polynomial(a.max(b)),
            _ => Degree::NonPolynomial,
        };
        Observable {
            name: format!("({}{sym}{})", self.name, other.name),
            chart: self.chart,
            degree,
            expr: Arc::new(Binary {
                op,
                lhs: self.expr.clone(),
                rhs: rhs.expr,
            }),
        }
    }

    /// Pointwise sum; `other` is pulled back to this observable's chart.
    pub fn add(&self, other: &Observable) -> Observable {
        self.binary(BinOp::Add, other, "+")
    }

    pub fn sub(&self, other: &Observable) -> Observable {
        self.binary(BinOp::Sub, other, "-")
    }

    pub fn mul(&self, other: &Observable) -> Observable {
        self.binary(BinOp::Mul, other, "*")
    }

    /// `scale * self + offset`.
    pub fn affine(&self, scale: f64, offset: f64) -> Observable {
        Observable {
            name: format!("({scale}*{}+{offset})", self.name),
            chart: self.chart,
            degree: self.degree,
            expr: Arc::new(Affine {
                inner: self.expr.clone(),
                scale,
                offset,
            }),
        }
    }

    pub fn scale(&self, s: f64) -> Observable {
        self.affine(s, 0.0)
    }
}
