//! Conformal modulus of doubly connected regions from the Dirichlet energy
//! of a discrete harmonic function.
//!
//! The potential is 0 on the inner curve and 1 on the outer one. Grid edges
//! cut by a boundary are shortened to the crossing point, which keeps the
//! linear system symmetric.

mod grid;
mod solver;

pub use grid::{CellClass, GridDiscretization};

use crate::geometry::{polyline_distance, winding_number, SegmentIndex};
use crate::puzzle::AnnulusRegion;
use crate::tableau::Mark;
use grid::{Side, NEIGHBOURS};
use num_complex::Complex64;
use serde::Serialize;
use solver::{pcg, Csr, Multigrid};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModulusError {
    #[error("region interior does not connect the two boundaries")]
    Disconnected,
    #[error("boundaries {gap:e} apart, fewer than 3 cells of size {spacing:e}")]
    ResolutionTooCoarse { gap: f64, spacing: f64 },
    #[error("linear solve stalled at relative residual {0:e}")]
    NotConverged(f64),
    #[error("parts do not subdivide the region: {0}")]
    NotASubdivision(String),
    #[error("invalid resolution {0}")]
    InvalidResolution(usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct ModulusConfig {
    /// Nodes per side of the grid.
    pub resolution: usize,
    /// Relative residual of the linear solve.
    pub tolerance: f64,
    /// Also solve at coarser powers of two, down to a quarter of the resolution.
    pub history: bool,
    /// Boundaries closer than this count as touching.
    pub touch_tolerance: f64,
    /// Put the value 1 on the inner curve and 0 on the outer one.
    pub swap_roles: bool,
}

impl Default for ModulusConfig {
    fn default() -> Self {
        ModulusConfig { resolution: 512, tolerance: 1e-10, history: false, touch_tolerance: 1e-6, swap_roles: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModulusEstimate {
    pub value: f64,
    pub resolution: usize,
    pub residual: f64,
    pub iterations: usize,
    pub degenerate: bool,
    pub pinch_points: Vec<[f64; 2]>,
    /// Change of the value when every boundary moves by one cell.
    pub uncertainty: f64,
    /// `(resolution, value)` pairs in increasing resolution, ending with this one.
    pub refinement_history: Vec<(usize, f64)>,
}

impl ModulusEstimate {
    /// Difference to the next coarser entry of the history, if any.
    pub fn discretization_error(&self) -> Option<f64> {
        let h = &self.refinement_history;
        (h.len() >= 2).then(|| (h[h.len() - 1].1 - h[h.len() - 2].1).abs())
    }
}

/// Modulus of `region` on a `resolution`² grid.
pub fn estimate_modulus(region: &AnnulusRegion, config: &ModulusConfig) -> Result<ModulusEstimate, ModulusError> {
    let n = config.resolution;
    if n < 16 {
        return Err(ModulusError::InvalidResolution(n));
    }
    let gap = if region.is_degenerate() { 0.0 } else { polyline_distance(&region.outer, &region.inner) };
    if gap <= config.touch_tolerance {
        let pinch_points = if region.pinch_points.is_empty() {
            touching_points(region, config.touch_tolerance)
        } else {
            region.pinch_points.clone()
        };
        return Ok(ModulusEstimate {
            value: 0.0,
            resolution: n,
            residual: 0.0,
            iterations: 0,
            degenerate: true,
            pinch_points: pinch_points.iter().map(|z| [z.re, z.im]).collect(),
            uncertainty: 0.0,
            refinement_history: vec![(n, 0.0)],
        });
    }
    let mut history = Vec::new();
    if config.history {
        let mut m = (n / 4).max(64);
        while m < n {
            history.push((m, solve(region, m, gap, config)?.value));
            m *= 2;
        }
    }
    let mut est = solve(region, n, gap, config)?;
    history.push((n, est.value));
    est.refinement_history = history;
    Ok(est)
}

fn touching_points(region: &AnnulusRegion, tol: f64) -> Vec<Complex64> {
    let mut r = AnnulusRegion::new(region.outer.clone(), region.inner.clone());
    r.detect_pinches(tol);
    r.pinch_points
}

fn solve(region: &AnnulusRegion, n: usize, gap: f64, config: &ModulusConfig) -> Result<ModulusEstimate, ModulusError> {
    let g = GridDiscretization::new(&region.outer, &region.inner, n);
    if gap < 3.0 * g.spacing {
        return Err(ModulusError::ResolutionTooCoarse { gap, spacing: g.spacing });
    }
    let (outer_value, inner_value) = if config.swap_roles { (0.0, 1.0) } else { (1.0, 0.0) };
    let boundary_value = |s: Side| if s == Side::Hole { inner_value } else { outer_value };

    let mut index = vec![usize::MAX; n * n];
    let mut positions = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if g.side(i, j) == Side::Inside {
                index[j * n + i] = positions.len();
                positions.push((i, j));
            }
        }
    }
    if positions.is_empty() || !connects_boundaries(&g, &index, &positions) {
        return Err(ModulusError::Disconnected);
    }

    let mut rows = Vec::with_capacity(positions.len());
    let mut rhs = vec![0.0; positions.len()];
    // (unknown, boundary value, cut fraction) per cut edge
    let mut cuts = Vec::new();
    for (k, &(i, j)) in positions.iter().enumerate() {
        let mut row = Vec::with_capacity(5);
        let mut diag = 0.0;
        for (di, dj) in NEIGHBOURS {
            let (a, b) = ((i as isize + di) as usize, (j as isize + dj) as usize);
            let q = index[b * n + a];
            if q != usize::MAX {
                row.push((q, -1.0));
                diag += 1.0;
            } else {
                let theta = g.cut_fraction(i, j, di, dj).max(THETA_MIN);
                let v = boundary_value(g.side(a, b));
                diag += 1.0 / theta;
                rhs[k] += v / theta;
                cuts.push((k, v, theta));
            }
        }
        row.push((k, diag));
        rows.push(row);
    }
    let a = Csr::from_rows(rows);
    let mg = Multigrid::new(a.clone(), &positions);
    let mut u = vec![0.5; positions.len()];
    let stats = pcg(&a, &mg, &rhs, &mut u, config.tolerance, 2000);
    if stats.relative_residual > config.tolerance {
        return Err(ModulusError::NotConverged(stats.relative_residual));
    }

    let mut energy = 0.0;
    for (k, &(i, j)) in positions.iter().enumerate() {
        for (a, b) in [(i + 1, j), (i, j + 1)] {
            let q = index[b * n + a];
            if q != usize::MAX {
                energy += (u[k] - u[q]).powi(2);
            }
        }
    }
    let mut shift = 0.0;
    for &(k, v, theta) in &cuts {
        energy += (u[k] - v).powi(2) / theta;
        shift += (u[k] - v).powi(2) / (theta * theta);
    }
    if energy <= 0.0 {
        return Err(ModulusError::Disconnected);
    }
    let value = 1.0 / energy;
    Ok(ModulusEstimate {
        value,
        resolution: n,
        residual: stats.relative_residual,
        iterations: stats.iterations,
        degenerate: false,
        pinch_points: Vec::new(),
        uncertainty: value * value * shift,
        refinement_history: Vec::new(),
    })
}

const THETA_MIN: f64 = 0.05;

/// True if some connected set of unknowns touches both boundaries.
fn connects_boundaries(g: &GridDiscretization, index: &[usize], positions: &[(usize, usize)]) -> bool {
    let n = g.resolution;
    let mut seen = vec![false; positions.len()];
    for start in 0..positions.len() {
        if seen[start] {
            continue;
        }
        let (mut hole, mut outside) = (false, false);
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(k) = queue.pop_front() {
            let (i, j) = positions[k];
            for (di, dj) in NEIGHBOURS {
                let (a, b) = ((i as isize + di) as usize, (j as isize + dj) as usize);
                let q = index[b * n + a];
                if q == usize::MAX {
                    match g.side(a, b) {
                        Side::Hole => hole = true,
                        _ => outside = true,
                    }
                } else if !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
        if hole && outside {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, Serialize)]
pub struct GroetzschDefect {
    /// `mod(whole) - Σ mod(parts)`.
    pub defect: f64,
    /// Twice the summed discretization error estimates.
    pub tolerance: f64,
    pub whole: f64,
    pub parts: Vec<f64>,
}

impl GroetzschDefect {
    pub fn holds(&self) -> bool {
        self.defect >= -self.tolerance
    }
}

/// Superadditivity defect of a subdivision of `whole` into nested `parts`.
pub fn groetzsch_defect(
    whole: &AnnulusRegion,
    parts: &[AnnulusRegion],
    config: &ModulusConfig,
) -> Result<GroetzschDefect, ModulusError> {
    check_subdivision(whole, parts, config.touch_tolerance)?;
    let cfg = ModulusConfig { history: true, ..config.clone() };
    let w = estimate_modulus(whole, &cfg)?;
    let ps = parts.iter().map(|p| estimate_modulus(p, &cfg)).collect::<Result<Vec<_>, _>>()?;
    let err = |e: &ModulusEstimate| e.discretization_error().unwrap_or(e.uncertainty);
    let tolerance = 2.0 * (err(&w) + ps.iter().map(err).sum::<f64>());
    let parts: Vec<f64> = ps.iter().map(|e| e.value).collect();
    Ok(GroetzschDefect { defect: w.value - parts.iter().sum::<f64>(), tolerance, whole: w.value, parts })
}

fn check_subdivision(whole: &AnnulusRegion, parts: &[AnnulusRegion], tol: f64) -> Result<(), ModulusError> {
    if parts.is_empty() {
        return Err(ModulusError::NotASubdivision("no parts".into()));
    }
    let outer = SegmentIndex::closed(&whole.outer);
    let inner = SegmentIndex::closed(&whole.inner);
    let in_closure = |z: Complex64| winding_number(&whole.outer, z) != 0 || outer.within(z, tol);
    let off_hole = |z: Complex64| winding_number(&whole.inner, z) == 0 || inner.within(z, tol);
    for (k, p) in parts.iter().enumerate() {
        for &z in p.outer.iter().chain(&p.inner) {
            if !in_closure(z) || !off_hole(z) {
                return Err(ModulusError::NotASubdivision(format!("part {k} leaves the region at {z}")));
            }
        }
        let part_inner = SegmentIndex::closed(&p.inner);
        if whole.inner.iter().any(|&z| winding_number(&p.inner, z) == 0 && !part_inner.within(z, tol)) {
            return Err(ModulusError::NotASubdivision(format!("part {k} does not surround the inner curve")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringVerdict {
    pub mark: Mark,
    pub parent: f64,
    pub child: f64,
    /// `parent / child`; absent when the child is degenerate.
    pub ratio: Option<f64>,
    pub relative_tolerance: f64,
    pub holds: bool,
}

/// Compares `mod(parent) / mod(child)` with the value the mark predicts:
/// 2 for critical, 1 for off-critical, below 2 for semi-critical.
pub fn covering_ratio_check(
    parent: &AnnulusRegion,
    child: &AnnulusRegion,
    mark: Mark,
    relative_tolerance: f64,
    config: &ModulusConfig,
) -> Result<CoveringVerdict, ModulusError> {
    let p = estimate_modulus(parent, config)?;
    let c = estimate_modulus(child, config)?;
    let ratio = (!c.degenerate && c.value > 0.0).then(|| p.value / c.value);
    let holds = match (ratio, mark) {
        (Some(r), Mark::Critical) => (r - 2.0).abs() <= 2.0 * relative_tolerance,
        (Some(r), Mark::OffCritical) => (r - 1.0).abs() <= relative_tolerance,
        (Some(r), Mark::SemiCritical) => r < 2.0 * (1.0 + relative_tolerance),
        // a degenerate child forces a degenerate parent
        (None, _) => p.degenerate,
    };
    Ok(CoveringVerdict { mark, parent: p.value, child: c.value, ratio, relative_tolerance, holds })
}

#[cfg(test)]
mod tests;
