//! Exact angles on the circle `R/Z` and their doubling combinatorics.

use crate::dynamics::Rotation;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AngleError {
    #[error("malformed angle {0:?}")]
    Malformed(String),
    #[error("angle {0:?} has zero denominator")]
    ZeroDenominator(String),
    #[error("no doubling cycle with rotation number {0}")]
    NoCycle(String),
}

/// Exact rational angle in `[0, 1)`, measured in turns.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(BigRational);

impl Angle {
    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    pub fn new(num: i64, den: i64) -> Result<Self, AngleError> {
        if den == 0 {
            return Err(AngleError::ZeroDenominator(format!("{num}/{den}")));
        }
        Ok(Self::from_ratio(BigRational::new(num.into(), den.into())))
    }

    /// Reduces any rational into `[0, 1)`.
    pub fn from_ratio(r: BigRational) -> Self {
        let fl = r.floor();
        Angle(r - fl)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    pub fn double(&self) -> Angle {
        Angle::from_ratio(&self.0 * BigInt::from(2))
    }

    /// The two angles that double to `self`.
    pub fn preimages(&self) -> (Angle, Angle) {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let a = &self.0 * &half;
        let b = &a + &half;
        (Angle(a), Angle(b))
    }

    /// `2^n * self mod 1` as a float, computed exactly before rounding.
    pub fn pow2_frac_f64(&self, n: u32) -> f64 {
        let den = self.denom().magnitude();
        let num = self.numer().magnitude();
        let two = BigUint::from(2u32);
        let m = (num * two.modpow(&BigUint::from(n), den)) % den;
        ratio_to_f64(&m, den)
    }

    pub fn add(&self, other: &Angle) -> Angle {
        Angle::from_ratio(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Angle) -> Angle {
        Angle::from_ratio(&self.0 - &other.0)
    }

    /// Counter-clockwise distance from `self` to `other`, in `[0, 1)`.
    pub fn ccw_to(&self, other: &Angle) -> BigRational {
        other.sub(self).0
    }

    pub fn half(&self) -> Angle {
        Angle(&self.0 / BigInt::from(2))
    }

    /// Preperiod and period under doubling.
    pub fn orbit_type(&self) -> (usize, usize) {
        let mut seen = std::collections::HashMap::new();
        let mut a = self.clone();
        let mut k = 0usize;
        loop {
            if let Some(&j) = seen.get(&a) {
                return (j, k - j);
            }
            seen.insert(a.clone(), k);
            a = a.double();
            k += 1;
        }
    }
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    // shift both into f64 range without losing the leading bits
    let bits = den.bits();
    if bits <= 1000 {
        return num.to_f64().unwrap_or(0.0) / den.to_f64().unwrap_or(1.0);
    }
    let shift = bits - 900;
    let n = (num >> shift).to_f64().unwrap_or(0.0);
    let d = (den >> shift).to_f64().unwrap_or(1.0);
    n / d
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({self})")
    }
}

impl FromStr for Angle {
    type Err = AngleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| AngleError::Malformed(s.to_string()))?;
        let d: BigInt = d.parse().map_err(|_| AngleError::Malformed(s.to_string()))?;
        if d.is_zero() {
            return Err(AngleError::ZeroDenominator(s.to_string()));
        }
        if n.sign() == num_bigint::Sign::Minus || d.sign() == num_bigint::Sign::Minus {
            return Err(AngleError::Malformed(s.to_string()));
        }
        Ok(Angle::from_ratio(BigRational::new(n, d)))
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A periodic cycle of angles under doubling, sorted by value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleCycle {
    pub angles: Vec<Angle>,
    pub rotation: Rotation,
}

impl AngleCycle {
    pub fn contains(&self, a: &Angle) -> bool {
        self.angles.binary_search(a).is_ok()
    }
}

/// The period-`q` doubling cycle whose circular order turns by `p/q`.
pub fn alpha_cycle(rotation: Rotation) -> Result<AngleCycle, AngleError> {
    let (p, q) = (rotation.p(), rotation.q());
    if q > 30 {
        return Err(AngleError::NoCycle(rotation.to_string()));
    }
    let modulus: u64 = (1u64 << q) - 1;
    let dbl = |m: u64| (2 * m) % modulus;
    for start in 1..modulus {
        let mut orbit = vec![start];
        let mut m = dbl(start);
        while m != start && orbit.len() <= q as usize {
            if m < start {
                break;
            }
            orbit.push(m);
            m = dbl(m);
        }
        if m != start || orbit.len() != q as usize {
            continue;
        }
        let mut sorted = orbit.clone();
        sorted.sort_unstable();
        let rotates = (0..q as usize).all(|i| dbl(sorted[i]) == sorted[(i + p as usize) % q as usize]);
        if rotates {
            let den = BigInt::from(modulus);
            let angles = sorted
                .into_iter()
                .map(|n| Angle::from_ratio(BigRational::new(BigInt::from(n), den.clone())))
                .collect();
            return Ok(AngleCycle { angles, rotation });
        }
    }
    Err(AngleError::NoCycle(rotation.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(a("1/7").double(), a("2/7"));
        assert_eq!(a("4/7").double(), a("1/7"));
        assert_eq!(a("1/2").double(), Angle::zero());
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(a("1/7").preimages(), (a("1/14"), a("4/7")));
        assert_eq!(Angle::zero().preimages(), (Angle::zero(), a("1/2")));
        assert_eq!(a("2/7").preimages(), (a("1/7"), a("9/14")));
    }

    #[test]
    fn alpha_cycle_examples() {
        let cyc = |p, q| alpha_cycle(Rotation::new(p, q).unwrap()).unwrap().angles;
        assert_eq!(cyc(1, 2), vec![a("1/3"), a("2/3")]);
        assert_eq!(cyc(1, 3), vec![a("1/7"), a("2/7"), a("4/7")]);
        assert_eq!(cyc(2, 3), vec![a("3/7"), a("5/7"), a("6/7")]);
        assert_eq!(cyc(1, 4), vec![a("1/15"), a("2/15"), a("4/15"), a("8/15")]);
    }

    #[test]
    fn parsing() {
        assert_eq!(a("3/6"), a("1/2"));
        assert_eq!(a("7/7"), Angle::zero());
        assert_eq!(a("0"), Angle::zero());
        assert!(matches!("1/0".parse::<Angle>(), Err(AngleError::ZeroDenominator(_))));
        assert!("x/3".parse::<Angle>().is_err());
        assert!("-1/3".parse::<Angle>().is_err());
        assert_eq!(a("2/14").to_string(), "1/7");
    }

    #[test]
    fn pow2_frac_matches_repeated_doubling() {
        let t = a("5/56");
        let mut d = t.clone();
        for n in 0..70 {
            assert!((t.pow2_frac_f64(n) - d.to_f64()).abs() < 1e-15);
            d = d.double();
        }
    }

    #[test]
    fn orbit_types() {
        assert_eq!(a("1/7").orbit_type(), (0, 3));
        assert_eq!(a("1/6").orbit_type(), (1, 2));
        assert_eq!(a("1/2").orbit_type(), (1, 1));
    }
}
