use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinate chart a [`PhasePoint`] is expressed in.
///
/// * `Cartesian`: `(x, y, p_x, p_y)`
/// * `Polar`: `(r, φ, p_r, p_φ)`
/// * `Parabolic`: `(a, b, p_a, p_b)` with `x = a² − b²`, `y = 2ab`
/// * `ParabolicRotated`: `(α, β, p_α, p_β)` with `a = (α+β)/√2`, `b = (α−β)/√2`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Cartesian,
    Polar,
    Parabolic,
    ParabolicRotated,
}

impl Chart {
    pub const ALL: [Chart; 4] = [
        Chart::Cartesian,
        Chart::Polar,
        Chart::Parabolic,
        Chart::ParabolicRotated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Chart::Cartesian => "cartesian",
            Chart::Polar => "polar",
            Chart::Parabolic => "parabolic",
            Chart::ParabolicRotated => "parabolic_rotated",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Chart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Chart::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown chart `{s}`")))
    }
}

/// Two coordinates and their conjugate momenta, tagged with a chart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    chart: Chart,
    z: [f64; 4],
}

impl PhasePoint {
    pub fn new(chart: Chart, q1: f64, q2: f64, p1: f64, p2: f64) -> Result<Self> {
        Self::from_array(chart, [q1, q2, p1, p2])
    }

    pub fn from_array(chart: Chart, z: [f64; 4]) -> Result<Self> {
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::DomainViolation(format!(
                "non-finite phase point component in {z:?}"
            )));
        }
        match chart {
            Chart::Polar if z[0] <= 0.0 => {
                return Err(Error::DomainViolation(format!(
                    "polar chart requires r > 0, got {}",
                    z[0]
                )))
            }
            Chart::Parabolic | Chart::ParabolicRotated if z[0] == 0.0 && z[1] == 0.0 => {
                return Err(Error::DomainViolation(
                    "parabolic chart requires (a, b) ≠ (0, 0)".into(),
                ))
            }
            _ => {}
        }
        Ok(PhasePoint { chart, z })
    }

    pub fn cartesian(x: f64, y: f64, px: f64, py: f64) -> Result<Self> {
        Self::new(Chart::Cartesian, x, y, px, py)
    }

    pub fn polar(r: f64, phi: f64, pr: f64, pphi: f64) -> Result<Self> {
        Self::new(Chart::Polar, r, phi, pr, pphi)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.z
    }

    pub fn q1(&self) -> f64 {
        self.z[0]
    }
    pub fn q2(&self) -> f64 {
        self.z[1]
    }
    pub fn p1(&self) -> f64 {
        self.z[2]
    }
    pub fn p2(&self) -> f64 {
        self.z[3]
    }
}

/// Rational number `num/den` in lowest terms with `den ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Ratio {
    num: u32,
    den: u32,
}

impl Ratio {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParams("m denominator must be ≥ 1".into()));
        }
        if num == 0 {
            return Err(Error::InvalidParams("m must be positive".into()));
        }
        let g = gcd(num, den);
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    pub const fn integer(n: u32) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub fn num(&self) -> u32 {
        self.num
    }
    pub fn den(&self) -> u32 {
        self.den
    }
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Ratio {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("cannot parse `{s}` as p/q"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: u32 = n.parse().map_err(|_| bad())?;
        let d: u32 = d.parse().map_err(|_| bad())?;
        Ratio::new(n, d)
    }
}

impl TryFrom<String> for Ratio {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Ratio> for String {
    fn from(r: Ratio) -> String {
        r.to_string()
    }
}

/// Parameters shared by the catalog. Each system reads only the fields it needs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamSet {
    /// Deformation / curvature parameter κ.
    pub kappa: f64,
    /// Oscillator frequency α.
    pub alpha: f64,
    /// Kepler coupling g.
    pub g: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    /// Angular strengths of `F_m`.
    pub ka: f64,
    pub kb: f64,
    /// Rational angular frequency m.
    pub m: Ratio,
}

impl Default for ParamSet {
    fn default() -> Self {
        ParamSet {
            kappa: 0.0,
            alpha: 1.0,
            g: 1.0,
            k1: 1.0,
            k2: 1.0,
            k3: 1.0,
            ka: 1.0,
            kb: 1.0,
            m: Ratio::integer(1),
        }
    }
}

/// Largest magnitude accepted for any real parameter.
pub const PARAM_LIMIT: f64 = 1e6;

impl ParamSet {
    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_m(mut self, m: Ratio) -> Self {
        self.m = m;
        self
    }

    pub const NAMES: [&'static str; 9] = ["kappa", "alpha", "g", "k1", "k2", "k3", "ka", "kb", "m"];

    /// Set a field by name, e.g. from a `key=value` CLI flag.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if key == "m" {
            self.m = value.parse()?;
            return Ok(());
        }
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("`{key}={value}` is not a number")))?;
        let slot = match key {
            "kappa" => &mut self.kappa,
            "alpha" => &mut self.alpha,
            "g" => &mut self.g,
            "k1" => &mut self.k1,
            "k2" => &mut self.k2,
            "k3" => &mut self.k3,
            "ka" => &mut self.ka,
            "kb" => &mut self.kb,
            _ => return Err(Error::InvalidParams(format!("unknown parameter `{key}`"))),
        };
        *slot = v;
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "kappa" => self.kappa,
            "alpha" => self.alpha,
            "g" => self.g,
            "k1" => self.k1,
            "k2" => self.k2,
            "k3" => self.k3,
            "ka" => self.ka,
            "kb" => self.kb,
            "m" => self.m.to_f64(),
            _ => return None,
        })
    }

    /// Reject non-finite or absurdly large values.
    pub fn validate(&self) -> Result<()> {
        for name in Self::NAMES {
            let v = self.get(name).unwrap_or(0.0);
            if !v.is_finite() || v.abs() > PARAM_LIMIT {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v:e} outside the accepted range |{name}| ≤ {PARAM_LIMIT:e}"
                )));
            }
        }
        if self.alpha < 0.0 {
            return Err(Error::InvalidParams("alpha must be ≥ 0".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_reduces_and_parses() {
        let r: Ratio = "6/4".parse().unwrap();
        assert_eq!((r.num(), r.den()), (3, 2));
        assert_eq!("5".parse::<Ratio>().unwrap(), Ratio::integer(5));
        assert!("1/0".parse::<Ratio>().is_err());
        assert!("x/2".parse::<Ratio>().is_err());
        assert_eq!(Ratio::new(5, 2).unwrap().to_string(), "5/2");
    }

    #[test]
    fn chart_invariants() {
        assert!(PhasePoint::polar(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(PhasePoint::new(Chart::Parabolic, 0.0, 0.0, 1.0, 0.0).is_err());
        assert!(PhasePoint::cartesian(f64::NAN, 0.0, 0.0, 0.0).is_err());
        assert!(PhasePoint::cartesian(0.0, 0.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn params_set_and_validate() {
        let mut p = ParamSet::default();
        p.set("kappa", "0.25").unwrap();
        p.set("m", "3/2").unwrap();
        assert_eq!(p.kappa, 0.25);
        assert_eq!(p.m, Ratio::new(3, 2).unwrap());
        assert!(p.set("zeta", "1").is_err());
        p.kappa = -1e300;
        assert!(p.validate().is_err());
    }

    #[test]
    fn params_json_round_trip() {
        let p = ParamSet::default().with_m(Ratio::new(5, 2).unwrap());
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"m\":\"5/2\""));
        let back: ParamSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
