//! Yoccoz puzzles: pieces bounded by equipotential arcs and external rays
//! landing at the alpha fixed point and its preimages.
//!
//! Each piece is carried twice: symbolically, as the arcs of angles where it
//! meets its equipotential, and geometrically, as a closed polyline.

mod arcs;
mod checks;

pub use arcs::{Arc, ArcSet};
pub use checks::{CovarianceReport, CovarianceSample, MarkovReport, MarkovViolation};

use crate::dynamics::{Parameter, DEFAULT_GREEN_BUDGET};
use crate::geometry::{polyline_distance, winding_number, BBox, SegmentIndex};
use crate::rays::{
    equipotential_arc, landing_point, ray_point, trace_ray_deep, Angle, AngleCycle, ExternalRay, RayError,
    MATCH_TOL,
};
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::OnceLock;
use thiserror::Error;

/// Index-convention note attached to every report: `A_d(z)` is the region
/// between `∂P_d(z)` and `∂P_{d+1}(z)`.
pub const ANNULUS_CONVENTION: &str =
    "A_d(z) is the annulus between the boundary of P_d(z) and the boundary of P_{d+1}(z), so f maps A_d(z_j) onto A_{d-1}(z_{j+1})";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PuzzleError {
    #[error("ray {angle} did not land: {reason}")]
    RaysDidNotLand { angle: String, reason: String },
    #[error("inconsistent landing: {0}")]
    InconsistentLanding(String),
    #[error("pullback to depth {depth} failed: {detail}")]
    PullbackFailed { depth: usize, detail: String },
    #[error("critical value lies on a depth-{0} boundary")]
    CriticalValueOnBoundary(usize),
    #[error("piece {inner:?} is not nested inside {outer:?}")]
    NotNested { outer: PieceRef, inner: PieceRef },
    #[error("depth {0} has not been built")]
    DepthNotBuilt(usize),
    #[error(transparent)]
    Ray(#[from] RayError),
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum LocateError {
    #[error("point within {distance:e} of a depth-{depth} boundary")]
    OnBoundary { depth: usize, distance: f64 },
    #[error("point has potential {potential} above the depth-{depth} level")]
    OutsidePuzzle { depth: usize, potential: f64 },
    #[error("depth {0} has not been built")]
    DepthNotBuilt(usize),
}

/// `(depth, id)` of a piece.
pub type PieceRef = (usize, usize);

#[derive(Debug, Clone)]
pub struct PuzzleConfig {
    /// Green level of the depth-0 equipotential.
    pub r0: f64,
    pub steps_per_halving: usize,
    /// Rays are traced down to potential `r0 * 2^-ray_halvings`.
    pub ray_halvings: usize,
    /// Equipotential samples per unit angle, scaled by `2^depth`.
    pub arc_density: f64,
    /// Boundary tolerance for membership queries.
    pub delta: f64,
    /// Angle of a ray landing at the critical value, when known. Makes the
    /// location of the critical value purely symbolic.
    pub critical_value_angle: Option<Angle>,
}

impl Default for PuzzleConfig {
    fn default() -> Self {
        PuzzleConfig {
            r0: 1.0,
            steps_per_halving: 8,
            ray_halvings: 32,
            arc_density: 96.0,
            delta: 1e-6,
            critical_value_angle: None,
        }
    }
}

#[derive(Debug, Clone)]
struct RayRecord {
    samples: Vec<Complex64>,
    landing: Complex64,
}

#[derive(Debug)]
pub struct PuzzlePiece {
    pub depth: usize,
    pub id: usize,
    pub arcs: ArcSet,
    pub contains_critical: bool,
    pub contains_critical_value: bool,
    /// The depth-`(depth-1)` piece containing this one.
    pub parent: Option<usize>,
    /// The depth-`(depth-1)` piece this one maps onto.
    pub image: Option<usize>,
    pub children: Vec<usize>,
    /// A point strictly inside the piece.
    pub probe: Complex64,
    boundary: Vec<Complex64>,
    bbox: BBox,
    index: OnceLock<SegmentIndex>,
}

impl Clone for PuzzlePiece {
    fn clone(&self) -> Self {
        PuzzlePiece {
            depth: self.depth,
            id: self.id,
            arcs: self.arcs.clone(),
            contains_critical: self.contains_critical,
            contains_critical_value: self.contains_critical_value,
            parent: self.parent,
            image: self.image,
            children: self.children.clone(),
            probe: self.probe,
            boundary: self.boundary.clone(),
            bbox: self.bbox,
            index: OnceLock::new(),
        }
    }
}

impl PuzzlePiece {
    pub fn boundary(&self) -> &[Complex64] {
        &self.boundary
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn diameter(&self) -> f64 {
        self.bbox.diameter()
    }

    pub fn reference(&self) -> PieceRef {
        (self.depth, self.id)
    }

    /// Replaces the boundary polyline (used for negative controls).
    pub fn set_boundary(&mut self, boundary: Vec<Complex64>) {
        self.bbox = BBox::of(&boundary);
        self.boundary = boundary;
        self.index = OnceLock::new();
    }

    fn index(&self) -> &SegmentIndex {
        self.index.get_or_init(|| SegmentIndex::closed(&self.boundary))
    }

    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        self.index().distance(z)
    }

    /// Winding-number membership, ignoring the boundary tolerance.
    pub fn encloses(&self, z: Complex64) -> bool {
        self.bbox.contains(z, 0.0) && winding_number(&self.boundary, z) != 0
    }
}

/// Region between two nested closed curves.
#[derive(Debug, Clone)]
pub struct AnnulusRegion {
    pub outer: Vec<Complex64>,
    pub inner: Vec<Complex64>,
    pub pinch_points: Vec<Complex64>,
}

impl AnnulusRegion {
    pub fn new(outer: Vec<Complex64>, inner: Vec<Complex64>) -> AnnulusRegion {
        AnnulusRegion { outer, inner, pinch_points: Vec::new() }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.pinch_points.is_empty()
    }

    /// Detects inner vertices within `delta` of the outer curve; each
    /// consecutive run of them contributes its middle vertex.
    pub fn detect_pinches(&mut self, delta: f64) {
        let idx = SegmentIndex::closed(&self.outer);
        let near: Vec<bool> = self.inner.iter().map(|&z| idx.within(z, delta)).collect();
        self.pinch_points = runs(&near).into_iter().map(|(s, len)| self.inner[(s + len / 2) % near.len()]).collect();
    }
}

/// Cyclic runs of `true`, as `(start, length)`.
fn runs(flags: &[bool]) -> Vec<(usize, usize)> {
    let n = flags.len();
    if n == 0 {
        return Vec::new();
    }
    if flags.iter().all(|&f| f) {
        return vec![(0, n)];
    }
    let first_false = flags.iter().position(|&f| !f).unwrap_or(0);
    let mut out = Vec::new();
    let mut k = 0;
    while k < n {
        let i = (first_false + k) % n;
        if flags[i] {
            let start = i;
            let mut len = 0;
            while k < n && flags[(first_false + k) % n] {
                len += 1;
                k += 1;
            }
            out.push((start, len));
        } else {
            k += 1;
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Puzzle {
    pub param: Parameter,
    pub r0: f64,
    pub alpha: Complex64,
    pub alpha_cycle: AngleCycle,
    pub config: PuzzleConfig,
    pub levels: Vec<Vec<PuzzlePiece>>,
    rays: HashMap<Angle, RayRecord>,
    critical_value_pieces: Vec<usize>,
}

impl Puzzle {
    /// Builds depth 0 and refines to `depth`.
    pub fn build(
        param: Parameter,
        cycle: AngleCycle,
        depth: usize,
        config: PuzzleConfig,
    ) -> Result<Puzzle, PuzzleError> {
        let mut p = Puzzle::build_depth_zero(param, cycle, config)?;
        while p.depth() < depth {
            p.refine()?;
        }
        Ok(p)
    }

    /// The `q` sectors cut from the depth-0 disk by the cycle rays.
    pub fn build_depth_zero(param: Parameter, cycle: AngleCycle, config: PuzzleConfig) -> Result<Puzzle, PuzzleError> {
        let sanity = param.c == Complex64::new(0.0, 0.0);
        let mut config = config;
        if sanity && config.critical_value_angle.is_none() {
            // the critical value 0 is the common landing point
            config.critical_value_angle = Some(Angle::zero());
        }
        let mut puzzle = Puzzle {
            param,
            r0: config.r0,
            alpha: Complex64::new(0.0, 0.0),
            alpha_cycle: cycle.clone(),
            config,
            levels: Vec::new(),
            rays: HashMap::new(),
            critical_value_pieces: Vec::new(),
        };
        let traced = puzzle.trace_rays(&cycle.angles)?;
        let mut landings = Vec::new();
        for ray in &traced {
            if sanity {
                landings.push(Complex64::new(0.0, 0.0));
                continue;
            }
            let l = landing_point(ray, &param)
                .map_err(|e| PuzzleError::RaysDidNotLand { angle: ray.angle.to_string(), reason: e.to_string() })?;
            landings.push(l.point);
        }
        for (k, l) in landings.iter().enumerate() {
            if (l - landings[0]).norm() > MATCH_TOL {
                return Err(PuzzleError::InconsistentLanding(format!(
                    "rays {} and {} land {:e} apart",
                    cycle.angles[0],
                    cycle.angles[k],
                    (l - landings[0]).norm()
                )));
            }
        }
        let alpha = if sanity {
            Complex64::new(0.0, 0.0)
        } else {
            let fp = param.fixed_points().map_err(|e| PuzzleError::InconsistentLanding(e.to_string()))?;
            if (landings[0] - fp.alpha).norm() > MATCH_TOL {
                return Err(PuzzleError::InconsistentLanding(format!(
                    "cycle rays land at {} away from alpha {}",
                    landings[0], fp.alpha
                )));
            }
            fp.alpha
        };
        puzzle.alpha = alpha;
        for ray in traced {
            puzzle.rays.insert(ray.angle, RayRecord { samples: ray.samples, landing: alpha });
        }
        let q = cycle.angles.len();
        let half = num_rational::BigRational::new(1.into(), 2.into());
        let specs: Vec<(ArcSet, bool, Option<usize>)> = (0..q)
            .map(|i| {
                let arc = Arc::new(cycle.angles[i].clone(), cycle.angles[(i + 1) % q].clone());
                let critical = arc.len() > half;
                (ArcSet::new(vec![arc]), critical, None)
            })
            .collect();
        let pieces = puzzle.make_pieces(0, specs)?;
        puzzle.levels.push(pieces);
        let cv = puzzle.locate_critical_value(0, None)?;
        puzzle.critical_value_pieces.push(cv);
        puzzle.levels[0][cv].contains_critical_value = true;
        Ok(puzzle)
    }

    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    /// Green level of the depth-`d` equipotential.
    pub fn level(&self, d: usize) -> f64 {
        self.r0 * f64::powi(2.0, -(d as i32))
    }

    fn ray_floor(&self) -> f64 {
        self.level(self.config.ray_halvings)
    }

    pub fn piece(&self, r: PieceRef) -> &PuzzlePiece {
        &self.levels[r.0][r.1]
    }

    pub fn critical_piece(&self, d: usize) -> Option<&PuzzlePiece> {
        self.levels.get(d)?.iter().find(|p| p.contains_critical)
    }

    pub fn critical_value_piece(&self, d: usize) -> Option<&PuzzlePiece> {
        self.critical_value_pieces.get(d).map(|&i| &self.levels[d][i])
    }

    /// All bounding angles at depth `d`.
    pub fn bounding_angles(&self, d: usize) -> Vec<Angle> {
        let mut v: Vec<Angle> = self.levels[d].iter().flat_map(|p| p.arcs.endpoints().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Traced samples of a bounding ray, from potential `r0` down.
    pub fn ray_samples(&self, angle: &Angle) -> Option<&[Complex64]> {
        self.rays.get(angle).map(|r| r.samples.as_slice())
    }

    pub fn ray_landing(&self, angle: &Angle) -> Option<Complex64> {
        self.rays.get(angle).map(|r| r.landing)
    }

    fn trace_rays(&self, angles: &[Angle]) -> Result<Vec<ExternalRay>, PuzzleError> {
        let (r0, floor, l) = (self.r0, self.ray_floor(), self.config.steps_per_halving);
        let param = self.param;
        angles.par_iter().map(|a| Ok(trace_ray_deep(&param, a, r0, floor, l)?)).collect()
    }

    /// Appends one more depth by pulling back the deepest level.
    pub fn refine(&mut self) -> Result<(), PuzzleError> {
        let d = self.depth();
        let cv = self.critical_value_pieces[d];
        let tau = match &self.config.critical_value_angle {
            Some(t) => t.clone(),
            None => self.levels[d][cv].arcs.interior_angle(),
        };
        let mut specs = Vec::new();
        for r in &self.levels[d] {
            if r.id == cv {
                specs.push((r.arcs.lift(), true, Some(r.id)));
            } else {
                let (a, b) = r.arcs.lift_split(&tau);
                if a.is_empty() || b.is_empty() {
                    return Err(PuzzleError::PullbackFailed {
                        depth: d + 1,
                        detail: format!("piece {} did not split into two lifts", r.id),
                    });
                }
                specs.push((a, false, Some(r.id)));
                specs.push((b, false, Some(r.id)));
            }
        }
        // trace the new rays and land them by pulling back known landing points
        let mut fresh: Vec<Angle> = specs
            .iter()
            .flat_map(|s| s.0.endpoints().cloned().collect::<Vec<_>>())
            .filter(|a| !self.rays.contains_key(a))
            .collect();
        fresh.sort();
        fresh.dedup();
        let traced = self.trace_rays(&fresh)?;
        for ExternalRay { angle, samples, .. } in traced {
            let image = self
                .rays
                .get(&angle.double())
                .ok_or_else(|| PuzzleError::PullbackFailed {
                    depth: d + 1,
                    detail: format!("image of ray {angle} is not a known bounding ray"),
                })?
                .landing;
            let landing = if self.param.c == Complex64::new(0.0, 0.0) {
                Complex64::new(0.0, 0.0)
            } else {
                let root = (image - self.param.c).sqrt();
                let deep = *samples.last().expect("non-empty ray");
                let (near, far) = if (deep - root).norm() <= (deep + root).norm() { (root, -root) } else { (-root, root) };
                if (deep - near).norm() * 4.0 > (deep - far).norm() {
                    return Err(PuzzleError::PullbackFailed {
                        depth: d + 1,
                        detail: format!("ray {angle} ends too far from either preimage landing point"),
                    });
                }
                near
            };
            self.rays.insert(angle, RayRecord { samples, landing });
        }
        let mut pieces = self.make_pieces(d + 1, specs)?;
        // containment is symbolic: find the depth-d arc holding each new piece
        let lookup = ArcLookup::new(&self.levels[d]);
        for p in pieces.iter_mut() {
            let x = p.arcs.interior_angle();
            p.parent = lookup.find(&x);
            if p.parent.is_none() {
                return Err(PuzzleError::PullbackFailed { depth: d + 1, detail: format!("no parent for piece {}", p.id) });
            }
        }
        for p in &pieces {
            let par = p.parent.expect("checked above");
            self.levels[d][par].children.push(p.id);
        }
        self.levels.push(pieces);
        let next_cv = self.locate_critical_value(d + 1, Some(cv))?;
        self.critical_value_pieces.push(next_cv);
        self.levels[d + 1][next_cv].contains_critical_value = true;
        Ok(())
    }

    fn make_pieces(
        &self,
        depth: usize,
        specs: Vec<(ArcSet, bool, Option<usize>)>,
    ) -> Result<Vec<PuzzlePiece>, PuzzleError> {
        specs
            .into_par_iter()
            .enumerate()
            .map(|(id, (arcs, critical, image))| {
                let boundary = self.boundary_of(depth, &arcs)?;
                let probe = ray_point(&self.param, &arcs.interior_angle(), self.level(depth) * 0.5, self.config.steps_per_halving)?;
                Ok(PuzzlePiece {
                    depth,
                    id,
                    arcs,
                    contains_critical: critical,
                    contains_critical_value: false,
                    parent: None,
                    image,
                    children: Vec::new(),
                    probe,
                    bbox: BBox::of(&boundary),
                    boundary,
                    index: OnceLock::new(),
                })
            })
            .collect()
    }

    /// Closed polyline: each equipotential arc, then down the ray at its end
    /// to the landing point, then up the ray starting the next arc.
    fn boundary_of(&self, depth: usize, arcs: &ArcSet) -> Result<Vec<Complex64>, PuzzleError> {
        let t = self.level(depth);
        let i0 = depth * self.config.steps_per_halving;
        let fail = |detail: String| PuzzleError::PullbackFailed { depth, detail };
        let ray = |a: &Angle| -> Result<&RayRecord, PuzzleError> {
            let r = self.rays.get(a).ok_or_else(|| fail(format!("ray {a} not traced")))?;
            if r.samples.len() <= i0 + 1 {
                return Err(fail(format!("ray {a} is too short for depth {depth}")));
            }
            Ok(r)
        };
        let list = arcs.arcs();
        let mut out = Vec::new();
        for (i, arc) in list.iter().enumerate() {
            let next = &list[(i + 1) % list.len()];
            let (ra, rb, rn) = (ray(&arc.start)?, ray(&arc.end)?, ray(&next.start)?);
            if (rb.landing - rn.landing).norm() > 1e-9 * (1.0 + rb.landing.norm()) {
                return Err(PuzzleError::InconsistentLanding(format!(
                    "rays {} and {} bound one leaf but land {:e} apart",
                    arc.end,
                    next.start,
                    (rb.landing - rn.landing).norm()
                )));
            }
            let len = arc.len_f64();
            let m = ((len * self.config.arc_density * f64::powi(2.0, depth as i32)).ceil() as usize).clamp(3, 128);
            let pts = equipotential_arc(&self.param, &arc.start, len, t, ra.samples[i0], m)?;
            let end = pts[m];
            if (end - rb.samples[i0]).norm() > 1e-8 * (1.0 + end.norm()) {
                return Err(fail(format!("equipotential from {} missed ray {}", arc.start, arc.end)));
            }
            out.push(ra.samples[i0]);
            out.extend_from_slice(&pts[..m]);
            out.extend_from_slice(&rb.samples[i0..]);
            out.push(rb.landing);
            out.extend(rn.samples[i0 + 1..].iter().rev());
        }
        Ok(out)
    }

    fn locate_critical_value(&self, d: usize, parent: Option<usize>) -> Result<usize, PuzzleError> {
        let candidates: Vec<usize> = match parent {
            None => (0..self.levels[d].len()).collect(),
            Some(p) => self.levels[d - 1][p].children.clone(),
        };
        if let Some(theta) = &self.config.critical_value_angle {
            return candidates
                .into_iter()
                .find(|&i| self.levels[d][i].arcs.contains_interior(theta))
                .ok_or(PuzzleError::CriticalValueOnBoundary(d));
        }
        let c = self.param.c;
        for i in candidates {
            let p = &self.levels[d][i];
            if p.encloses(c) {
                if p.boundary_distance(c) < self.config.delta {
                    return Err(PuzzleError::CriticalValueOnBoundary(d));
                }
                return Ok(i);
            }
        }
        Err(PuzzleError::CriticalValueOnBoundary(d))
    }

    /// Chain of pieces containing `z` at depths `0..=max_depth`; stops at
    /// the first depth where membership cannot be decided.
    pub fn locate_chain(&self, z: Complex64, max_depth: usize) -> (Vec<usize>, Option<LocateError>) {
        let mut chain = Vec::new();
        let g = self.param.green_value(z, DEFAULT_GREEN_BUDGET);
        for d in 0..=max_depth {
            if d >= self.levels.len() {
                return (chain, Some(LocateError::DepthNotBuilt(d)));
            }
            if g >= self.level(d) {
                return (chain, Some(LocateError::OutsidePuzzle { depth: d, potential: g }));
            }
            let candidates: Vec<usize> = match chain.last() {
                None => (0..self.levels[0].len()).collect(),
                Some(&p) => self.levels[d - 1][p].children.clone(),
            };
            let mut found = None;
            for i in candidates {
                let p = &self.levels[d][i];
                if p.bbox.contains(z, self.config.delta) {
                    let dist = p.boundary_distance(z);
                    if dist < self.config.delta {
                        return (chain, Some(LocateError::OnBoundary { depth: d, distance: dist }));
                    }
                    if winding_number(&p.boundary, z) != 0 {
                        found = Some(i);
                        break;
                    }
                }
            }
            match found {
                Some(i) => chain.push(i),
                None => return (chain, Some(LocateError::OnBoundary { depth: d, distance: 0.0 })),
            }
        }
        (chain, None)
    }

    pub fn piece_containing(&self, depth: usize, z: Complex64) -> Result<&PuzzlePiece, LocateError> {
        let (chain, err) = self.locate_chain(z, depth);
        match err {
            Some(e) => Err(e),
            None => Ok(&self.levels[depth][chain[depth]]),
        }
    }

    /// Region between two nested pieces, with touching points marked.
    pub fn annulus_between(&self, outer: PieceRef, inner: PieceRef) -> Result<AnnulusRegion, PuzzleError> {
        for r in [outer, inner] {
            if r.0 >= self.levels.len() {
                return Err(PuzzleError::DepthNotBuilt(r.0));
            }
        }
        let (po, pi) = (self.piece(outer), self.piece(inner));
        if inner.0 <= outer.0 || !po.arcs.contains_set(&pi.arcs) {
            return Err(PuzzleError::NotNested { outer, inner });
        }
        let mut region = AnnulusRegion::new(po.boundary.clone(), pi.boundary.clone());
        region.detect_pinches(self.config.delta);
        Ok(region)
    }

    /// `A_d(z)`: between the depth-`d` and depth-`d+1` pieces around the
    /// chain `pieces` (indices by depth).
    pub fn annulus_at(&self, chain: &[usize], d: usize) -> Result<AnnulusRegion, PuzzleError> {
        if d + 1 >= chain.len() {
            return Err(PuzzleError::DepthNotBuilt(d + 1));
        }
        self.annulus_between((d, chain[d]), (d + 1, chain[d + 1]))
    }

    /// Minimum distance between the boundaries of the critical pieces at
    /// depths `d` and `d + 2`.
    pub fn separation(&self, d: usize) -> Result<f64, PuzzleError> {
        let a = self.critical_piece(d).ok_or(PuzzleError::DepthNotBuilt(d))?;
        let b = self.critical_piece(d + 2).ok_or(PuzzleError::DepthNotBuilt(d + 2))?;
        Ok(polyline_distance(&a.boundary, &b.boundary))
    }

    /// Critical-piece chain (ids by depth).
    pub fn critical_chain(&self) -> Vec<usize> {
        (0..self.levels.len()).map(|d| self.critical_piece(d).map(|p| p.id).unwrap_or(0)).collect()
    }
}

/// Binary search over the arcs of one depth.
struct ArcLookup<'a> {
    starts: Vec<(&'a Arc, usize)>,
}

impl<'a> ArcLookup<'a> {
    fn new(pieces: &'a [PuzzlePiece]) -> Self {
        let mut starts: Vec<(&Arc, usize)> = pieces.iter().flat_map(|p| p.arcs.arcs().iter().map(move |a| (a, p.id))).collect();
        starts.sort_by(|a, b| a.0.start.cmp(&b.0.start));
        ArcLookup { starts }
    }

    fn find(&self, x: &Angle) -> Option<usize> {
        let k = self.starts.partition_point(|(a, _)| &a.start <= x);
        let cand = if k == 0 { self.starts.len() - 1 } else { k - 1 };
        let (arc, id) = self.starts[cand];
        arc.contains_interior(x).then_some(id)
    }
}

#[cfg(test)]
mod tests;
