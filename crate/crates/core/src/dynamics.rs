//! The quadratic family `f_c(z) = z^2 + c`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Orbits are cut off once `|z|` passes this bound.
pub const GREEN_TRUNCATION: f64 = 1e100;

/// Default iteration budget for [`Parameter::green_value`].
pub const DEFAULT_GREEN_BUDGET: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid rotation number {0}/{1}: need 0 < p/q < 1 in lowest terms with q >= 2")]
    InvalidRotation(u64, u64),
    #[error("malformed rotation number {0:?}")]
    MalformedRotation(String),
    #[error("fixed points collide at c = {0}")]
    DegenerateFixedPoint(Complex64),
}

/// Rotation number `p/q` of the alpha fixed point, always in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rotation {
    p: u64,
    q: u64,
}

impl Rotation {
    pub fn new(p: u64, q: u64) -> Result<Self, DynamicsError> {
        if q < 2 || p == 0 || p >= q || num_integer::gcd(p, q) != 1 {
            return Err(DynamicsError::InvalidRotation(p, q));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Rotation {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DynamicsError::MalformedRotation(s.to_string());
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        Rotation::new(p, q)
    }
}

/// A member of the quadratic family, optionally tagged with its limb.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameter {
    pub c: Complex64,
    pub limb: Option<Rotation>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoints {
    pub alpha: Complex64,
    pub beta: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSample {
    pub start: Complex64,
    pub points: Vec<Complex64>,
}

impl Parameter {
    pub fn new(c: Complex64) -> Self {
        Self { c, limb: None }
    }

    pub fn with_limb(c: Complex64, limb: Rotation) -> Self {
        Self { c, limb: Some(limb) }
    }

    #[inline]
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        z * z + self.c
    }

    pub fn escape_radius(&self) -> f64 {
        self.c.norm().max(2.0) + 1.0
    }

    /// Roots of `z^2 - z + c`. Beta takes the principal square root.
    pub fn fixed_points(&self) -> Result<FixedPoints, DynamicsError> {
        let disc = Complex64::new(1.0, 0.0) - 4.0 * self.c;
        if disc.norm() < 1e-12 {
            return Err(DynamicsError::DegenerateFixedPoint(self.c));
        }
        let s = disc.sqrt();
        let beta = polish_fixed_point(self.c, (1.0 + s) * 0.5);
        let alpha = polish_fixed_point(self.c, (1.0 - s) * 0.5);
        Ok(FixedPoints { alpha, beta })
    }

    /// Escape-rate potential `G(z)`, or 0 if the orbit stays below the
    /// escape radius for `budget` iterations.
    pub fn green_value(&self, z: Complex64, budget: usize) -> f64 {
        let budget = budget.max(1);
        let r_esc = self.escape_radius();
        let mut w = z;
        let mut scale = 1.0;
        let mut escaped = w.norm() > r_esc;
        for _ in 0..budget {
            if w.norm() > GREEN_TRUNCATION {
                break;
            }
            w = self.evaluate(w);
            scale *= 0.5;
            if !escaped && w.norm() > r_esc {
                escaped = true;
            }
        }
        if !escaped {
            return 0.0;
        }
        (scale * w.norm().ln()).max(0.0)
    }

    pub fn orbit(&self, start: Complex64, length: usize) -> OrbitSample {
        let mut points = Vec::with_capacity(length);
        let mut z = start;
        for k in 0..length {
            if k > 0 {
                z = self.evaluate(z);
            }
            points.push(z);
        }
        OrbitSample { start, points }
    }

    /// `c_0 = 0, c_1 = c, ...`
    pub fn critical_orbit(&self, length: usize) -> OrbitSample {
        self.orbit(Complex64::new(0.0, 0.0), length)
    }
}

fn polish_fixed_point(c: Complex64, mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let g = z * z - z + c;
        let dg = 2.0 * z - 1.0;
        if dg.norm() < 1e-300 {
            break;
        }
        let step = g / dg;
        z -= step;
        if step.norm() < 1e-17 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(Parameter::new(c(0.0, 0.0)).evaluate(c(2.0, 0.0)), c(4.0, 0.0));
        assert_eq!(Parameter::new(c(0.0, 1.0)).evaluate(c(0.0, 0.0)), c(0.0, 1.0));
        assert_eq!(Parameter::new(c(0.0, 1.0)).evaluate(c(0.0, 1.0)), c(-1.0, 1.0));
    }

    #[test]
    fn fixed_points_closed_forms() {
        let fp = Parameter::new(c(0.0, 0.0)).fixed_points().unwrap();
        assert_eq!(fp.alpha, c(0.0, 0.0));
        assert_eq!(fp.beta, c(1.0, 0.0));
        let fp = Parameter::new(c(-2.0, 0.0)).fixed_points().unwrap();
        assert!((fp.alpha - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((fp.beta - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn fixed_points_degenerate_at_quarter() {
        let r = Parameter::new(c(0.25, 0.0)).fixed_points();
        assert!(matches!(r, Err(DynamicsError::DegenerateFixedPoint(_))));
    }

    #[test]
    fn fixed_points_c_i_against_oracle() {
        // mpmath, 50 digits: roots of z^2 - z + i
        let alpha = c(-0.30024259022012042, 0.62481053384382659);
        let beta = c(1.3002425902201204, -0.62481053384382659);
        let p = Parameter::new(c(0.0, 1.0));
        let fp = p.fixed_points().unwrap();
        assert!((fp.alpha - alpha).norm() < 1e-14);
        assert!((fp.beta - beta).norm() < 1e-14);
        assert!((p.evaluate(fp.alpha) - fp.alpha).norm() < 1e-12);
        assert!((p.evaluate(fp.beta) - fp.beta).norm() < 1e-12);
        assert!((2.0 * fp.beta).norm() > 1.0);
    }

    #[test]
    fn green_examples() {
        let p0 = Parameter::new(c(0.0, 0.0));
        assert!((p0.green_value(c(2.0, 0.0), 200) - 2f64.ln()).abs() < 1e-14);
        assert_eq!(p0.green_value(c(0.0, 1.0), 200), 0.0);
        // mpmath oracle: 2^-60 log|f^60(10)| at 200 digits, c = i
        let pi = Parameter::new(c(0.0, 1.0));
        assert!((pi.green_value(c(10.0, 0.0), 200) - 2.3026105929431139).abs() < 1e-12);
    }

    #[test]
    fn critical_orbit_examples() {
        let o = Parameter::new(c(0.0, 1.0)).critical_orbit(4).points;
        assert_eq!(o, vec![c(0.0, 0.0), c(0.0, 1.0), c(-1.0, 1.0), c(0.0, -1.0)]);
        let o = Parameter::new(c(0.0, 0.0)).critical_orbit(3).points;
        assert_eq!(o, vec![c(0.0, 0.0); 3]);
        let o = Parameter::new(c(-2.0, 0.0)).critical_orbit(4).points;
        assert_eq!(o, vec![c(0.0, 0.0), c(-2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn rotation_parsing() {
        assert_eq!("1/3".parse::<Rotation>().unwrap(), Rotation::new(1, 3).unwrap());
        assert!("2/4".parse::<Rotation>().is_err());
        assert!("1/0".parse::<Rotation>().is_err());
        assert!("x".parse::<Rotation>().is_err());
    }
}
