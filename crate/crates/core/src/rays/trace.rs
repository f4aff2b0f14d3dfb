//! Numerical external rays and equipotentials.

use super::angle::Angle;
use crate::dynamics::{Parameter, DEFAULT_GREEN_BUDGET};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

/// Iterates are pushed out until `2^n t` reaches this log-radius.
const ESCAPE_LOG_RADIUS: f64 = 13.815510557964274; // ln 1e6
const GREEN_RESIDUAL: f64 = 1e-9;
const MAX_NEWTON: usize = 60;
const MAX_BISECTIONS: usize = 8;
/// Landing tail agreement required by [`landing_point`].
pub const LANDING_TOL: f64 = 1e-5;
/// Distance under which a landing point is identified with a periodic point.
pub const MATCH_TOL: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RayError {
    #[error("ray {angle} diverged at potential {potential:e}")]
    TraceDiverged { angle: String, potential: f64 },
    #[error("ray {angle} did not land: {reason}")]
    NotLanded { angle: String, reason: String },
    #[error("invalid potential range {from} -> {to}")]
    BadRange { from: f64, to: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PeriodicMatch {
    Alpha,
    Beta,
    Periodic { period: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Landing {
    pub point: Complex64,
    /// Disagreement between two independent tail extrapolations.
    pub spread: f64,
    pub matched: Option<PeriodicMatch>,
}

#[derive(Debug, Clone)]
pub struct ExternalRay {
    pub angle: Angle,
    pub samples: Vec<Complex64>,
    pub potentials: Vec<f64>,
    pub steps_per_halving: usize,
    pub landing: Option<Landing>,
}

#[derive(Debug, Clone)]
pub struct Equipotential {
    pub level: f64,
    pub samples: Vec<Complex64>,
}

/// Solves `f^n(z) = w` by Newton iteration from `z`.
fn newton_iterate(param: &Parameter, mut z: Complex64, n: u32, w: Complex64) -> Option<Complex64> {
    let mut prev_step = f64::INFINITY;
    for _ in 0..MAX_NEWTON {
        let mut fz = z;
        let mut d = Complex64::new(1.0, 0.0);
        for _ in 0..n {
            d *= 2.0 * fz;
            fz = param.evaluate(fz);
        }
        if !fz.is_finite() || !d.is_finite() || d.norm() == 0.0 {
            return None;
        }
        let step = (fz - w) / d;
        let size = step.norm();
        let scale = 1.0 + z.norm();
        // roundoff floor: stop once the step no longer shrinks
        if size <= 1e-15 * scale || (size <= 1e-11 * scale && size > 0.5 * prev_step) {
            return Some(z - step);
        }
        z -= step;
        prev_step = size;
    }
    None
}

/// Target of the Newton solve for potential `t` on ray `angle`.
fn target(angle: &Angle, t: f64) -> (u32, Complex64) {
    let mut n = 0u32;
    while t * f64::powi(2.0, n as i32) < ESCAPE_LOG_RADIUS {
        n += 1;
    }
    let radius = t * f64::powi(2.0, n as i32);
    let arg = 2.0 * PI * angle.pow2_frac_f64(n);
    (n, Complex64::from_polar(radius.exp(), arg))
}

struct Tracer<'a> {
    param: &'a Parameter,
    angle: &'a Angle,
    z: Complex64,
    t: f64,
    last_step: f64,
}

impl Tracer<'_> {
    fn start<'a>(param: &'a Parameter, angle: &'a Angle) -> Tracer<'a> {
        let t = ESCAPE_LOG_RADIUS;
        let z = Complex64::from_polar(t.exp(), 2.0 * PI * angle.to_f64());
        Tracer { param, angle, z, t, last_step: 0.0 }
    }

    fn solve(&self, t: f64) -> Option<Complex64> {
        let (n, w) = target(self.angle, t);
        let z = newton_iterate(self.param, self.z, n, w)?;
        let g = self.param.green_value(z, DEFAULT_GREEN_BUDGET);
        if (g - t).abs() >= GREEN_RESIDUAL {
            return None;
        }
        let jump = (z - self.z).norm();
        if self.last_step > 0.0 && jump > 8.0 * self.last_step + 1e-12 {
            return None;
        }
        Some(z)
    }

    /// Moves to potential `t`, bisecting in log-potential when a step fails.
    fn advance(&mut self, t: f64) -> Result<(), RayError> {
        self.advance_inner(t, 0)
    }

    fn advance_inner(&mut self, t: f64, depth: usize) -> Result<(), RayError> {
        if let Some(z) = self.solve(t) {
            self.last_step = (z - self.z).norm();
            self.z = z;
            self.t = t;
            return Ok(());
        }
        if depth >= MAX_BISECTIONS {
            return Err(RayError::TraceDiverged { angle: self.angle.to_string(), potential: t });
        }
        let mid = (self.t * t).sqrt();
        self.advance_inner(mid, depth + 1)?;
        self.advance_inner(t, depth + 1)
    }

    fn descend_to(&mut self, t: f64, steps_per_halving: usize) -> Result<(), RayError> {
        let ratio = f64::powf(2.0, -1.0 / steps_per_halving as f64);
        while self.t * ratio > t {
            let next = self.t * ratio;
            self.advance(next)?;
        }
        if self.t > t {
            self.advance(t)?;
        }
        Ok(())
    }
}

/// Geometric potential schedule from `from` to `to` with `l` points per halving.
pub fn potential_schedule(from: f64, to: f64, l: usize) -> Vec<f64> {
    let halvings = (from / to).log2();
    let k = (halvings * l as f64 - 1e-9).ceil().max(1.0) as usize;
    let mut out: Vec<f64> = (0..k).map(|i| from * f64::powf(2.0, -(i as f64) / l as f64)).collect();
    out.push(to);
    out
}

/// Traces `angle` from potential `from` down to `to` with `steps` samples per halving.
pub fn trace_ray(
    param: &Parameter,
    angle: &Angle,
    from: f64,
    to: f64,
    steps: usize,
) -> Result<ExternalRay, RayError> {
    trace_impl(param, angle, from, to, steps, false)
}

/// Like [`trace_ray`], but a ray that loses precision below potential
/// `1e-5` is cut at its last good sample instead of failing.
pub fn trace_ray_deep(
    param: &Parameter,
    angle: &Angle,
    from: f64,
    to: f64,
    steps: usize,
) -> Result<ExternalRay, RayError> {
    trace_impl(param, angle, from, to, steps, true)
}

fn trace_impl(
    param: &Parameter,
    angle: &Angle,
    from: f64,
    to: f64,
    steps: usize,
    truncate: bool,
) -> Result<ExternalRay, RayError> {
    if !(from > to && to > 0.0 && from.is_finite()) {
        return Err(RayError::BadRange { from, to });
    }
    let steps = steps.max(1);
    let mut tracer = Tracer::start(param, angle);
    tracer.descend_to(from.min(tracer.t), steps)?;
    let schedule = potential_schedule(from, to, steps);
    let mut samples = Vec::with_capacity(schedule.len());
    let mut potentials = Vec::with_capacity(schedule.len());
    for &t in &schedule {
        if t > tracer.t {
            // `from` above the start radius: seed directly
            let (n, w) = target(angle, t);
            tracer.z = newton_iterate(param, Complex64::from_polar(t.exp(), 2.0 * PI * angle.to_f64()), n, w)
                .ok_or(RayError::TraceDiverged { angle: angle.to_string(), potential: t })?;
            tracer.t = t;
        } else if let Err(e) = tracer.descend_to(t, steps) {
            if truncate && t < 1e-5 {
                break;
            }
            return Err(e);
        }
        samples.push(tracer.z);
        potentials.push(t);
    }
    Ok(ExternalRay { angle: angle.clone(), samples, potentials, steps_per_halving: steps, landing: None })
}

/// The point of ray `angle` at potential `t`.
pub fn ray_point(param: &Parameter, angle: &Angle, t: f64, steps: usize) -> Result<Complex64, RayError> {
    let mut tracer = Tracer::start(param, angle);
    if t >= tracer.t {
        let (n, w) = target(angle, t);
        return newton_iterate(param, Complex64::from_polar(t.exp(), 2.0 * PI * angle.to_f64()), n, w)
            .ok_or(RayError::TraceDiverged { angle: angle.to_string(), potential: t });
    }
    tracer.descend_to(t, steps.max(1))?;
    Ok(tracer.z)
}

/// Same as [`ray_point`] for a float angle.
pub fn ray_point_f64(param: &Parameter, theta: f64, t: f64, steps: usize) -> Result<Complex64, RayError> {
    // exact enough: theta only enters through 2^n theta mod 1 with n <= ~60
    let angle = Angle::from_ratio(float_to_ratio(theta));
    ray_point(param, &angle, t, steps)
}

fn float_to_ratio(x: f64) -> num_rational::BigRational {
    num_rational::BigRational::from_float(x.rem_euclid(1.0)).unwrap_or_default()
}

/// Closed level curve `G = level`, sample `k` at angle `k / samples`.
pub fn trace_equipotential(param: &Parameter, level: f64, samples: usize) -> Result<Equipotential, RayError> {
    if level.is_nan() || level <= 0.0 {
        return Err(RayError::BadRange { from: level, to: 0.0 });
    }
    let pts: Result<Vec<_>, _> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let a = Angle::new(k as i64, samples as i64).expect("nonzero sample count");
            ray_point(param, &a, level, 8)
        })
        .collect();
    Ok(Equipotential { level, samples: pts? })
}

/// Samples of the level curve `G = t` at angles `a + len * k / (m + 1)`,
/// `k = 1..=m`, continued from `z_a` (the point at angle `a`). The final
/// entry is the point at angle `a + len`.
pub fn equipotential_arc(
    param: &Parameter,
    a: &Angle,
    len: f64,
    t: f64,
    z_a: Complex64,
    m: usize,
) -> Result<Vec<Complex64>, RayError> {
    let (n, _) = target(a, t);
    let radius = (t * f64::powi(2.0, n as i32)).exp();
    let base = a.pow2_frac_f64(n);
    let scale = f64::powi(2.0, n as i32);
    // sub-steps keep the rotation of the target below 1/32 turn
    let sub = ((len * scale * 32.0).ceil() as usize).max(1);
    let per = sub.div_ceil(m + 1).max(1);
    let total = per * (m + 1);
    let mut z = z_a;
    let mut out = Vec::with_capacity(m + 1);
    for k in 1..=total {
        let frac = len * k as f64 / total as f64;
        let arg = 2.0 * PI * (base + (scale * frac).rem_euclid(1.0));
        let w = Complex64::from_polar(radius, arg);
        z = newton_iterate(param, z, n, w).ok_or_else(|| RayError::TraceDiverged {
            angle: format!("{a}+{frac:.3e}"),
            potential: t,
        })?;
        if k % per == 0 {
            out.push(z);
        }
    }
    for z in &out {
        if (param.green_value(*z, DEFAULT_GREEN_BUDGET) - t).abs() >= GREEN_RESIDUAL {
            return Err(RayError::TraceDiverged { angle: a.to_string(), potential: t });
        }
    }
    Ok(out)
}

/// Newton on `f^p(z) = z`.
pub fn periodic_point_near(param: &Parameter, z0: Complex64, period: usize) -> Option<Complex64> {
    let mut z = z0;
    for _ in 0..50 {
        let mut fz = z;
        let mut d = Complex64::new(1.0, 0.0);
        for _ in 0..period {
            d *= 2.0 * fz;
            fz = param.evaluate(fz);
        }
        let den = d - 1.0;
        if den.norm() < 1e-14 || !fz.is_finite() {
            return None;
        }
        let step = (fz - z) / den;
        z -= step;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    None
}

fn aitken(a: Complex64, b: Complex64, c: Complex64) -> Complex64 {
    let d1 = b - a;
    let d2 = c - b;
    let den = d2 - d1;
    if den.norm() < 1e-300 {
        return c;
    }
    c - d2 * d2 / den
}

/// Extrapolates the limit of the deepest samples of `ray`.
pub fn landing_point(ray: &ExternalRay, param: &Parameter) -> Result<Landing, RayError> {
    let fail = |reason: String| RayError::NotLanded { angle: ray.angle.to_string(), reason };
    let last_t = *ray.potentials.last().ok_or_else(|| fail("empty ray".into()))?;
    if last_t > 1e-5 {
        return Err(fail(format!("traced only to potential {last_t:e}")));
    }
    let (pre, period) = ray.angle.orbit_type();
    let stride = ray.steps_per_halving * period;
    let k = ray.samples.len() - 1;
    // the final sample may sit off the uniform grid, so use the ones before it
    let s = &ray.samples;
    let est = |i: usize| {
        let x: Vec<Complex64> = (0..5).map(|j| s[i - (4 - j) * stride]).collect();
        let y: Vec<Complex64> = (0..3).map(|j| aitken(x[j], x[j + 1], x[j + 2])).collect();
        aitken(y[0], y[1], y[2])
    };
    if k < 4 * stride + 2 {
        return Err(fail("too few samples for tail extrapolation".into()));
    }
    let e1 = est(k - 1);
    let e2 = est(k - 2);
    let spread = (e1 - e2).norm();
    if spread > LANDING_TOL || !e1.is_finite() {
        return Err(fail(format!("tail spread {spread:e}")));
    }
    let mut point = e1;
    let mut matched = None;
    if pre == 0 {
        if let Some(p) = periodic_point_near(param, e1, period) {
            if (p - e1).norm() < MATCH_TOL {
                point = p;
                matched = Some(PeriodicMatch::Periodic { period });
            }
        }
    }
    if let Ok(fp) = param.fixed_points() {
        if (point - fp.alpha).norm() < MATCH_TOL {
            matched = Some(PeriodicMatch::Alpha);
        } else if (point - fp.beta).norm() < MATCH_TOL {
            matched = Some(PeriodicMatch::Beta);
        }
    }
    Ok(Landing { point, spread, matched })
}

/// Traces a ray deep enough for [`landing_point`] and attaches the result.
pub fn trace_landed(param: &Parameter, angle: &Angle, from: f64, steps: usize) -> Result<ExternalRay, RayError> {
    let (_, period) = angle.orbit_type();
    let mut last_err = None;
    for extra in [0, 10, 20] {
        let halvings = (6 * period + 18 + extra).max(30) as i32;
        let to = from * f64::powi(2.0, -halvings);
        let mut ray = trace_ray_deep(param, angle, from, to, steps)?;
        match landing_point(&ray, param) {
            Ok(l) => {
                ray.landing = Some(l);
                return Ok(ray);
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}
