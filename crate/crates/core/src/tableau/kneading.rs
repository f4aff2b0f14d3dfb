//! Exact tableaux from the external angle of the critical value.
//!
//! Two angles lie in the same depth-`e` piece iff their doubles lie in the
//! same depth-`(e-1)` piece and either that piece contains the critical
//! value or both angles sit on the same side of the diameter through
//! `θ/2` and `θ/2 + 1/2`.

use super::Mark;
use crate::rays::{Angle, AngleCycle};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Sector of `x` cut by the cycle angles; `None` on a cycle angle.
fn sector(cycle: &[Angle], x: &Angle) -> Option<usize> {
    if cycle.binary_search(x).is_ok() {
        return None;
    }
    let k = cycle.partition_point(|a| a < x);
    Some(if k == cycle.len() { 0 } else { k })
}

/// Side of `x` relative to the diameter `{θ/2, θ/2 + 1/2}`; `None` on it.
fn side(theta: &Angle, x: &Angle) -> Option<bool> {
    let (h0, _) = theta.preimages();
    let off = h0.ccw_to(x);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if off.is_zero() || off == half {
        None
    } else {
        Some(off < half)
    }
}

fn and3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

fn or3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    }
}

/// Marks at depths `0..=depth` and columns `0..width`; `None` where an
/// orbit angle falls on a piece boundary.
pub fn kneading_marks(theta: &Angle, cycle: &AngleCycle, depth: usize, width: usize) -> Vec<Vec<Option<Mark>>> {
    let cyc = &cycle.angles;
    let span = width + 2 * depth + 4;
    // orbit[k] = 2^k θ
    let mut orbit = Vec::with_capacity(span);
    let mut x = theta.clone();
    for _ in 0..span {
        orbit.push(x.clone());
        x = x.double();
    }
    let sectors: Vec<Option<usize>> = orbit.iter().map(|a| sector(cyc, a)).collect();
    let sides: Vec<Option<bool>> = orbit.iter().map(|a| side(theta, a)).collect();
    let same0 = |k: usize, i: usize| match (sectors[k], sectors[i]) {
        (Some(a), Some(b)) => Some(a == b),
        _ if orbit[k] == orbit[i] => Some(true),
        _ => None,
    };
    // s[e][k]: 2^k θ and θ share a depth-e piece
    // row e reads row e - 1 - t at column k + t + 1
    let mut s: Vec<Vec<Option<bool>>> = Vec::with_capacity(depth + 1);
    for e in 0..=depth {
        let kmax = width + 2 + depth - e;
        let mut row = Vec::with_capacity(kmax);
        for k in 0..kmax {
            let mut v = same0(k + e, e);
            for t in 0..e {
                // an angle on the diameter belongs to the critical point,
                // whose image piece contains the critical value
                let same_side = match (sides[k + t], sides[t]) {
                    (Some(a), Some(b)) => Some(a == b),
                    _ => Some(true),
                };
                v = and3(v, or3(same_side, s[e - 1 - t][k + t + 1]));
                if v == Some(false) {
                    break;
                }
            }
            row.push(v);
        }
        s.push(row);
    }
    // the critical sector contains θ/2
    let crit_sector = sector(cyc, &theta.preimages().0);
    let in_crit = |d: usize, k: usize| -> Option<bool> {
        if k == 0 {
            Some(true)
        } else if d == 0 {
            if sides[k - 1].is_none() {
                return Some(true);
            }
            match (sectors[k - 1], crit_sector) {
                (Some(a), Some(b)) => Some(a == b),
                _ => None,
            }
        } else {
            s[d - 1][k]
        }
    };
    (0..=depth)
        .map(|d| {
            (0..width)
                .map(|k| match in_crit(d, k)? {
                    true => Some(Mark::Critical),
                    false if d == 0 => Some(Mark::SemiCritical),
                    false => match in_crit(d - 1, k)? {
                        true => Some(Mark::SemiCritical),
                        false => Some(Mark::OffCritical),
                    },
                })
                .collect()
        })
        .collect()
}

/// Angle `0.t₁t₂…` in binary whose digit `t_k` is the parity of the
/// negative entries among the first `k - 1` signs of a real critical orbit
/// `c, f(c), …` (`true` = negative).
pub fn angle_from_signs(negative: &[bool]) -> Angle {
    let mut num = BigInt::zero();
    let mut parity = false;
    for &neg in negative {
        num = num * 2 + if parity { 1 } else { 0 };
        parity ^= neg;
    }
    let den = BigInt::one() << negative.len();
    Angle::from_ratio(BigRational::new(num, den))
}

/// Signs of the critical orbit `c, f(c), …` of the real Fibonacci map
/// (`true` = negative): each block between consecutive Fibonacci cutting
/// times repeats an earlier prefix with its last sign flipped.
pub fn fibonacci_signs(n: usize) -> Vec<bool> {
    let mut cut = vec![1usize, 2];
    while *cut.last().expect("non-empty") < n {
        let k = cut.len();
        cut.push(cut[k - 1] + cut[k - 2]);
    }
    let mut e = vec![true];
    for k in 1..cut.len() {
        let src = if k >= 2 { cut[k - 2] } else { 1 };
        for i in 0..src {
            let v = e[i];
            e.push(if i + 1 == src { !v } else { v });
        }
    }
    e.truncate(n);
    e
}

/// Dyadic approximation with `bits` digits of the external angle of the
/// real Fibonacci parameter `c ≈ -1.8705286321646448`.
pub fn fibonacci_angle(bits: usize) -> Angle {
    angle_from_signs(&fibonacci_signs(bits))
}
