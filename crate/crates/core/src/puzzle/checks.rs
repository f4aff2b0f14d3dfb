//! Consistency checks on a built puzzle.

use super::{PieceRef, Puzzle};
use crate::rays::{ray_point, Angle};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkovViolation {
    pub a: PieceRef,
    pub b: PieceRef,
    pub kind: String,
    /// Distance of the offending probe point from the other boundary.
    pub separation: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct MarkovReport {
    pub pairs_checked: usize,
    pub nested_pairs: usize,
    pub disjoint_pairs: usize,
    pub violations: Vec<MarkovViolation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceSample {
    pub piece: PieceRef,
    pub image: PieceRef,
    pub point: [f64; 2],
    pub distance_outside: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CovarianceReport {
    pub pieces_checked: usize,
    pub samples_checked: usize,
    /// Forward images found outside the asserted image piece beyond tolerance.
    pub escapes: Vec<CovarianceSample>,
    /// Samples of a piece that did not test inside the piece itself.
    pub self_misses: usize,
    /// Pieces whose preimage count disagreed with the expected degree.
    pub degree_mismatches: Vec<(PieceRef, usize, usize)>,
}

impl Puzzle {
    /// Every pair of pieces must be nested or have disjoint interiors; the
    /// symbolic verdict is confirmed with interior probe points.
    pub fn markov_check(&self) -> MarkovReport {
        let all: Vec<PieceRef> =
            self.levels.iter().flat_map(|lvl| lvl.iter().map(|p| (p.depth, p.id))).collect();
        let delta = self.config.delta;
        let per_piece: Vec<(usize, usize, usize, Vec<MarkovViolation>)> = all
            .par_iter()
            .enumerate()
            .map(|(i, &ra)| {
                let a = self.piece(ra);
                let mut out = (0, 0, 0, Vec::new());
                for &rb in &all[i + 1..] {
                    let b = self.piece(rb);
                    out.0 += 1;
                    let nested = rb.0 > ra.0 && a.arcs.contains_set(&b.arcs);
                    let disjoint = a.arcs.interiors_disjoint(&b.arcs);
                    if nested {
                        out.1 += 1;
                        if !a.encloses(b.probe) || a.boundary_distance(b.probe) < delta {
                            out.3.push(MarkovViolation {
                                a: ra,
                                b: rb,
                                kind: "nested piece not inside its container".into(),
                                separation: a.boundary_distance(b.probe),
                            });
                        }
                    } else if disjoint {
                        out.2 += 1;
                        for (x, y, rx, ry) in [(a, b, ra, rb), (b, a, rb, ra)] {
                            if x.bbox().overlaps(&y.bbox(), 0.0) && x.encloses(y.probe) {
                                out.3.push(MarkovViolation {
                                    a: rx,
                                    b: ry,
                                    kind: "disjoint pieces overlap".into(),
                                    separation: x.boundary_distance(y.probe),
                                });
                            }
                        }
                    } else {
                        out.3.push(MarkovViolation {
                            a: ra,
                            b: rb,
                            kind: "angle arcs overlap without nesting".into(),
                            separation: 0.0,
                        });
                    }
                }
                out
            })
            .collect();
        let mut report = MarkovReport::default();
        for (n, ne, di, v) in per_piece {
            report.pairs_checked += n;
            report.nested_pairs += ne;
            report.disjoint_pairs += di;
            report.violations.extend(v);
        }
        // each piece below depth 0 sits in exactly one piece one level up
        for lvl in self.levels.iter().skip(1) {
            for p in lvl {
                let n = self.levels[p.depth - 1].iter().filter(|q| q.arcs.contains_set(&p.arcs)).count();
                if n != 1 {
                    report.violations.push(MarkovViolation {
                        a: (p.depth, p.id),
                        b: (p.depth - 1, p.parent.unwrap_or(usize::MAX)),
                        kind: format!("contained in {n} pieces one level up"),
                        separation: 0.0,
                    });
                }
            }
        }
        report
    }

    /// A random point inside piece `r`: an angle inside one of its arcs at a
    /// potential below its level.
    pub fn interior_sample(&self, r: PieceRef, rng: &mut impl Rng) -> Complex64 {
        let p = self.piece(r);
        let weights: Vec<f64> = p.arcs.arcs().iter().map(|a| a.len_f64()).collect();
        let total: f64 = weights.iter().sum();
        let mut pick = rng.gen::<f64>() * total;
        let mut arc = &p.arcs.arcs()[0];
        for (a, w) in p.arcs.arcs().iter().zip(&weights) {
            arc = a;
            if pick < *w {
                break;
            }
            pick -= w;
        }
        let frac = rng.gen_range(0.02..0.98);
        let off = BigRational::from_float(frac).expect("finite") * arc.len();
        let angle = Angle::from_ratio(arc.start.as_ratio() + off);
        let t = self.level(r.0) * rng.gen_range(0.05..0.95);
        ray_point(&self.param, &angle, t, self.config.steps_per_halving).unwrap_or(p.probe)
    }

    /// Checks `f(P_{d+1}) ⊆ P_d(f)` on random interior samples of every piece
    /// at depths `1..=max_depth`, and the degree of `f` on each piece.
    pub fn forward_covariance(&self, max_depth: usize, samples_per_piece: usize, seed: u64) -> CovarianceReport {
        let refs: Vec<PieceRef> = (1..=max_depth.min(self.depth()))
            .flat_map(|d| self.levels[d].iter().map(move |p| (d, p.id)))
            .collect();
        let delta = self.config.delta;
        let parts: Vec<CovarianceReport> = refs
            .par_iter()
            .map(|&r| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((r.0 as u64) << 32 | r.1 as u64));
                let piece = self.piece(r);
                let image = (r.0 - 1, piece.image.expect("pieces below depth 0 have images"));
                let target = self.piece(image);
                let mut rep = CovarianceReport { pieces_checked: 1, ..Default::default() };
                let mut degree_counts = Vec::new();
                for _ in 0..samples_per_piece {
                    let z = self.interior_sample(r, &mut rng);
                    rep.samples_checked += 1;
                    if !piece.encloses(z) {
                        rep.self_misses += 1;
                    }
                    let w = self.param.evaluate(z);
                    if !target.encloses(w) {
                        let dist = target.boundary_distance(w);
                        if dist > delta {
                            rep.escapes.push(CovarianceSample {
                                piece: r,
                                image,
                                point: [z.re, z.im],
                                distance_outside: dist,
                            });
                        }
                    }
                    // preimage count of an independent point of the image piece
                    let v = self.interior_sample(image, &mut rng);
                    let root = (v - self.param.c).sqrt();
                    let count = [root, -root].iter().filter(|&&y| piece.encloses(y)).count();
                    degree_counts.push(count);
                }
                let expected = if piece.contains_critical { 2 } else { 1 };
                let bad = degree_counts.iter().filter(|&&c| c != expected).count();
                if bad > 0 {
                    rep.degree_mismatches.push((r, expected, bad));
                }
                rep
            })
            .collect();
        let mut out = CovarianceReport::default();
        for p in parts {
            out.pieces_checked += p.pieces_checked;
            out.samples_checked += p.samples_checked;
            out.self_misses += p.self_misses;
            out.escapes.extend(p.escapes);
            out.degree_mismatches.extend(p.degree_mismatches);
        }
        out
    }

    /// Diameters of the critical pieces by depth.
    pub fn critical_diameters(&self) -> Vec<f64> {
        (0..self.levels.len()).filter_map(|d| self.critical_piece(d).map(|p| p.diameter())).collect()
    }
}
