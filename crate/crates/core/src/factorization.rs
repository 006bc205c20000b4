//! Complex factorizations of the higher-order families.
//!
//! Each family carries a radial pair `A = A1 + i A2` and an angular pair
//! `B = B1 + i B2` whose phases rotate at rates proportional to a common
//! factor `λ`. For rational `m = p/q` a product with balanced integer
//! exponents is conserved.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dual::Scalar;
use crate::error::{domain, Error, Result};
use crate::observable::{Degree, Observable, PhaseFunction};
use crate::types::{Chart, ParamSet};

/// Which higher-order family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Oscillator type, `ttw_def`.
    Oscillator,
    /// Kepler type, `pw_def`.
    Kepler,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Oscillator => "oscillator",
            Family::Kepler => "kepler",
        })
    }
}

/// Both `sin²` and `cos²` below this count as a pole of `F_m`.
const POLE_TOL: f64 = 1e-24;

/// `F_m(φ) = k_a / cos²(mφ) + k_b / sin²(mφ)`.
pub fn f_m(phi: f64, params: &ParamSet) -> Result<f64> {
    f_m_generic(phi, params.m.to_f64(), params.ka, params.kb)
}

pub(crate) fn f_m_generic<T: Scalar>(phi: T, m: f64, ka: f64, kb: f64) -> Result<T> {
    let arg = phi * m;
    let (s2, c2) = (arg.sin().sq(), arg.cos().sq());
    if s2.value() < POLE_TOL || c2.value() < POLE_TOL {
        return Err(Error::AngularSingularity { phi: phi.value() });
    }
    Ok(c2.recip() * ka + s2.recip() * kb)
}

/// Minimal complex arithmetic over [`Scalar`].
#[derive(Clone, Copy, Debug)]
pub(crate) struct Cx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Cx<T> {
    fn mul(self, o: Self) -> Self {
        Cx {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn conj(self) -> Self {
        Cx {
            re: self.re,
            im: -self.im,
        }
    }

    fn norm_sq(self) -> T {
        self.re * self.re + self.im * self.im
    }

    fn powu(self, mut n: u32) -> Self {
        let mut base = self;
        let mut acc = Cx {
            re: T::cst(1.0),
            im: T::cst(0.0),
        };
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            n >>= 1;
        }
        acc
    }
}

/// Pieces shared by every observable of one family at one point.
struct Pieces<T> {
    a: Cx<T>,
    b: Cx<T>,
    lambda: T,
    j1: T,
    j2: T,
}

fn pieces<T: Scalar>(family: Family, p: &ParamSet, z: &[T; 4]) -> Result<Pieces<T>> {
    let [r, phi, pr, pphi] = *z;
    let m = p.m.to_f64();
    let f = f_m_generic(phi, m, p.ka, p.kb)?;
    let (c2m, s2m) = ((phi * (2.0 * m)).cos(), (phi * (2.0 * m)).sin());
    let r2 = r * r;
    match family {
        Family::Oscillator => {
            let w = r2 * -p.kappa + 1.0;
            if w.value() <= 0.0 {
                return Err(domain(format!("1 - kappa r^2 = {} must be positive", w.value())));
            }
            let j2 = pphi * pphi + f;
            let sj = sqrt_j2(j2)?;
            let j1 = (pr * pr + pphi * pphi / r2 + r2 * (p.alpha * p.alpha) + f / r2) / w;
            let a = Cx {
                re: pr * sj * 2.0 / r,
                im: (r2 * pr * pr + r2 * r2 * (p.alpha * p.alpha) - (r2 * (-2.0 * p.kappa) + 1.0) * j2)
                    / (w * r2),
            };
            let b = Cx {
                re: j2 * c2m + (p.kb - p.ka),
                im: pphi * sj * s2m,
            };
            Ok(Pieces {
                a,
                b,
                lambda: sj / (w * r2),
                j1,
                j2,
            })
        }
        Family::Kepler => {
            let s = r - p.kappa;
            if s.value() <= 0.0 {
                return Err(domain(format!("r - kappa = {} must be positive", s.value())));
            }
            let j2 = pphi * pphi + f * 2.0;
            let sj = sqrt_j2(j2)?;
            let j1 = (r * (pr * pr + pphi * pphi / r2) - p.g * 2.0 + f * 2.0 / r) / s;
            let a = Cx {
                re: -(pr * sj),
                im: (r * -p.g + j2 + (r * pr * pr - j2 / r) * (0.5 * p.kappa)) / s,
            };
            let b = Cx {
                re: j2 * c2m + 2.0 * (p.kb - p.ka),
                im: pphi * sj * s2m,
            };
            Ok(Pieces {
                a,
                b,
                lambda: sj / (s * r),
                j1,
                j2,
            })
        }
    }
}

fn sqrt_j2<T: Scalar>(j2: T) -> Result<T> {
    if j2.value() < 0.0 {
        return Err(Error::NegativeJ2(j2.value()));
    }
    j2.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    A1,
    A2,
    B1,
    B2,
    Lambda,
    ModA,
    ModB,
    ModARhs,
    ModBRhs,
    ModAScale,
    ModBScale,
}

#[derive(Clone, Copy, Debug)]
struct PairFn {
    family: Family,
    params: ParamSet,
    part: Part,
}

impl PhaseFunction for PairFn {
    fn eval<T: Scalar>(&self, z: &[T; 4]) -> Result<T> {
        let p = &self.params;
        let pc = pieces(self.family, p, z)?;
        let (j1, j2) = (pc.j1, pc.j2);
        let (k, a2) = (p.kappa, p.alpha * p.alpha);
        Ok(match self.part {
            Part::A1 => pc.a.re,
            Part::A2 => pc.a.im,
            Part::B1 => pc.b.re,
            Part::B2 => pc.b.im,
            Part::Lambda => pc.lambda,
            Part::ModA => pc.a.norm_sq(),
            Part::ModB => pc.b.norm_sq(),
            Part::ModARhs => match self.family {
                Family::Oscillator => j1 * j1 - j1 * j2 * (4.0 * k) - j2 * (4.0 * a2),
                Family::Kepler => {
                    j1 * j2 + j1 * j1 * (0.25 * k * k) - j1 * (k * p.g) + p.g * p.g
                }
            },
            Part::ModBRhs => match self.family {
                Family::Oscillator => {
                    j2 * j2 - j2 * (2.0 * (p.ka + p.kb)) + (p.kb - p.ka).powi(2)
                }
                Family::Kepler => j2 * j2 - j2 * (4.0 * (p.ka + p.kb)) + 4.0 * (p.ka - p.kb).powi(2),
            },
            Part::ModAScale => {
                let abs = |v: T| T::cst(v.value().abs());
                match self.family {
                    Family::Oscillator => {
                        abs(j1 * j1) + abs(j1 * j2 * (4.0 * k)) + abs(j2 * (4.0 * a2))
                    }
                    Family::Kepler => {
                        abs(j1 * j2)
                            + abs(j1 * j1 * (0.25 * k * k))
                            + abs(j1 * (k * p.g))
                            + p.g * p.g
                    }
                }
            }
            Part::ModBScale => {
                let abs = |v: T| T::cst(v.value().abs());
                match self.family {
                    Family::Oscillator => {
                        abs(j2 * j2) + abs(j2 * (2.0 * (p.ka + p.kb))) + (p.kb - p.ka).powi(2)
                    }
                    Family::Kepler => {
                        abs(j2 * j2) + abs(j2 * (4.0 * (p.ka + p.kb))) + 4.0 * (p.ka - p.kb).powi(2)
                    }
                }
            }
        })
    }
}

/// A complex phase-space function `re + i·im` whose time derivative is
/// `i·rate·λ·(re + i·im)`.
#[derive(Clone, Debug)]
pub struct ComplexPair {
    pub re: Observable,
    pub im: Observable,
    /// Multiple `c` of `λ` in the rotation rate.
    pub rate: f64,
}

/// The pairs `A`, `B` and the common factor `λ` of one family.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub family: Family,
    pub a: ComplexPair,
    pub b: ComplexPair,
    pub lambda: Observable,
}

fn check_couplings(params: &ParamSet) -> Result<()> {
    params.validate()?;
    if params.ka < 0.0 || params.kb < 0.0 {
        return Err(Error::InvalidParams(format!(
            "factorization needs ka, kb ≥ 0 (got ka = {}, kb = {})",
            params.ka, params.kb
        )));
    }
    Ok(())
}

fn pair_obs(family: Family, params: &ParamSet, part: Part, name: &str) -> Observable {
    Observable::new(
        name,
        Chart::Polar,
        Degree::NonPolynomial,
        PairFn {
            family,
            params: *params,
            part,
        },
    )
}

fn build_pair(family: Family, params: &ParamSet) -> Result<Factorization> {
    check_couplings(params)?;
    let two_m = 2.0 * params.m.to_f64();
    let a_rate = match family {
        Family::Oscillator => 2.0,
        Family::Kepler => 1.0,
    };
    let o = |part, name| pair_obs(family, params, part, name);
    Ok(Factorization {
        family,
        a: ComplexPair {
            re: o(Part::A1, "A1"),
            im: o(Part::A2, "A2"),
            rate: a_rate,
        },
        b: ComplexPair {
            re: o(Part::B1, "B1"),
            im: o(Part::B2, "B2"),
            rate: two_m,
        },
        lambda: o(Part::Lambda, "lambda"),
    })
}

/// Radial and angular pairs of the oscillator family; rates `2λ` and `2mλ`.
pub fn build_oscillator_pair(params: &ParamSet) -> Result<Factorization> {
    build_pair(Family::Oscillator, params)
}

/// Radial and angular pairs of the Kepler family; rates `λ` and `2mλ`.
pub fn build_kepler_pair(params: &ParamSet) -> Result<Factorization> {
    build_pair(Family::Kepler, params)
}

pub fn build_factorization(family: Family, params: &ParamSet) -> Result<Factorization> {
    build_pair(family, params)
}

/// `|A|²` and `|B|²` with the closed forms in `J1`, `J2` they should equal.
#[derive(Clone, Debug)]
pub struct Moduli {
    pub a_sq: Observable,
    pub a_rhs: Observable,
    /// Sum of absolute right-hand-side terms, the scale for relative residuals.
    pub a_scale: Observable,
    pub b_sq: Observable,
    pub b_rhs: Observable,
    pub b_scale: Observable,
}

pub fn moduli(family: Family, params: &ParamSet) -> Result<Moduli> {
    check_couplings(params)?;
    let o = |part, name| pair_obs(family, params, part, name);
    Ok(Moduli {
        a_sq: o(Part::ModA, "|A|^2"),
        a_rhs: o(Part::ModARhs, "|A|^2 rhs"),
        a_scale: o(Part::ModAScale, "|A|^2 scale"),
        b_sq: o(Part::ModB, "|B|^2"),
        b_rhs: o(Part::ModBRhs, "|B|^2 rhs"),
        b_scale: o(Part::ModBScale, "|B|^2 scale"),
    })
}

/// Exponents at or below this use repeated multiplication; above, log-polar form.
pub const DIRECT_POWER_LIMIT: u32 = 8;

#[derive(Clone, Copy, Debug)]
struct ProductFn {
    family: Family,
    params: ParamSet,
    e_a: u32,
    e_b: u32,
    imaginary: bool,
}

impl PhaseFunction for ProductFn {
    fn eval<T: Scalar>(&self, z: &[T; 4]) -> Result<T> {
        let pc = pieces(self.family, &self.params, z)?;
        let (na, nb) = (pc.a.norm_sq(), pc.b.norm_sq());
        if na.value() == 0.0 {
            return Err(Error::ZeroModulus("A"));
        }
        if nb.value() == 0.0 {
            return Err(Error::ZeroModulus("B"));
        }
        let k = if self.e_a.max(self.e_b) <= DIRECT_POWER_LIMIT {
            pc.a.powu(self.e_a).mul(pc.b.conj().powu(self.e_b))
        } else {
            let log_mod = na.ln()? * (0.5 * self.e_a as f64) + nb.ln()? * (0.5 * self.e_b as f64);
            let arg = pc.a.im.atan2(pc.a.re) * self.e_a as f64 - pc.b.im.atan2(pc.b.re) * self.e_b as f64;
            let modulus = log_mod.exp();
            Cx {
                re: modulus * arg.cos(),
                im: modulus * arg.sin(),
            }
        };
        Ok(if self.imaginary { k.im } else { k.re })
    }
}

/// A conserved product `K = A^{e_A} (B*)^{e_B}`.
#[derive(Clone, Debug)]
pub struct FactorizedConstant {
    pub family: Family,
    /// `m = p / q`.
    pub p: u32,
    pub q: u32,
    pub e_a: u32,
    pub e_b: u32,
    pub re_k: Observable,
    pub im_k: Observable,
}

/// The balanced product: exponents `(p, q)` for the oscillator family and
/// `(2p, q)` for the Kepler family.
pub fn build_constant(family: Family, params: &ParamSet) -> Result<FactorizedConstant> {
    let (p, q) = (params.m.num(), params.m.den());
    let e_a = match family {
        Family::Oscillator => p,
        Family::Kepler => 2 * p,
    };
    build_product(family, params, e_a, q)
}

/// Arbitrary exponents; conserved only when `e_A·c_A = e_B·c_B`.
pub fn build_product(family: Family, params: &ParamSet, e_a: u32, e_b: u32) -> Result<FactorizedConstant> {
    check_couplings(params)?;
    if e_a == 0 && e_b == 0 {
        return Err(Error::InvalidParams("at least one exponent must be positive".into()));
    }
    let make = |imaginary: bool, name: &str| {
        Observable::new(
            name,
            Chart::Polar,
            Degree::NonPolynomial,
            ProductFn {
                family,
                params: *params,
                e_a,
                e_b,
                imaginary,
            },
        )
    };
    Ok(FactorizedConstant {
        family,
        p: params.m.num(),
        q: params.m.den(),
        e_a,
        e_b,
        re_k: make(false, "ReK"),
        im_k: make(true, "ImK"),
    })
}

impl FactorizedConstant {
    /// Rotation-rate imbalance `e_A·c_A − e_B·c_B` in units of `λ`.
    pub fn rate_imbalance(&self, m: f64) -> f64 {
        let c_a = match self.family {
            Family::Oscillator => 2.0,
            Family::Kepler => 1.0,
        };
        self.e_a as f64 * c_a - self.e_b as f64 * 2.0 * m
    }
}
