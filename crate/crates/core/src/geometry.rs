//! Planar polyline utilities: bounding boxes, winding numbers, distances.

use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BBox {
    pub fn of(points: &[Complex64]) -> BBox {
        let mut b = BBox {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        };
        for p in points {
            b.min_x = b.min_x.min(p.re);
            b.min_y = b.min_y.min(p.im);
            b.max_x = b.max_x.max(p.re);
            b.max_y = b.max_y.max(p.im);
        }
        b
    }

    pub fn contains(&self, z: Complex64, pad: f64) -> bool {
        z.re >= self.min_x - pad && z.re <= self.max_x + pad && z.im >= self.min_y - pad && z.im <= self.max_y + pad
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn overlaps(&self, o: &BBox, pad: f64) -> bool {
        self.min_x <= o.max_x + pad
            && o.min_x <= self.max_x + pad
            && self.min_y <= o.max_y + pad
            && o.min_y <= self.max_y + pad
    }
}

/// Winding number of the closed polygon `poly` around `z`.
pub fn winding_number(poly: &[Complex64], z: Complex64) -> i32 {
    let n = poly.len();
    let mut w = 0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if a.im <= z.im {
            if b.im > z.im && cross(b - a, z - a) > 0.0 {
                w += 1;
            }
        } else if b.im <= z.im && cross(b - a, z - a) < 0.0 {
            w -= 1;
        }
    }
    w
}

#[inline]
fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

pub fn point_segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

pub fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

pub fn segment_distance(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Signed area (positive for counter-clockwise).
pub fn signed_area(poly: &[Complex64]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| cross(poly[i], poly[(i + 1) % n])).sum::<f64>() * 0.5
}

/// Uniform-grid bucket index over the segments of one or more closed polylines.
#[derive(Debug, Clone)]
pub struct SegmentIndex {
    segs: Vec<(Complex64, Complex64)>,
    bbox: BBox,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl SegmentIndex {
    pub fn closed(poly: &[Complex64]) -> SegmentIndex {
        let n = poly.len();
        let segs = (0..n).map(|i| (poly[i], poly[(i + 1) % n])).collect();
        Self::from_segments(segs)
    }

    pub fn from_segments(segs: Vec<(Complex64, Complex64)>) -> SegmentIndex {
        let pts: Vec<Complex64> = segs.iter().flat_map(|s| [s.0, s.1]).collect();
        let bbox = BBox::of(&pts);
        let span = bbox.width().max(bbox.height()).max(1e-12);
        let side = ((segs.len() as f64).sqrt().ceil() as usize).clamp(1, 512);
        let cell = span / side as f64;
        let nx = ((bbox.width() / cell).floor() as usize + 1).min(1024);
        let ny = ((bbox.height() / cell).floor() as usize + 1).min(1024);
        let mut idx = SegmentIndex { segs, bbox, cell, nx, ny, buckets: vec![Vec::new(); nx * ny] };
        for (k, &(a, b)) in idx.segs.iter().enumerate() {
            let (i0, j0) = idx.cell_of(Complex64::new(a.re.min(b.re), a.im.min(b.im)));
            let (i1, j1) = idx.cell_of(Complex64::new(a.re.max(b.re), a.im.max(b.im)));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    idx.buckets[j * nx + i].push(k as u32);
                }
            }
        }
        idx
    }

    fn cell_of(&self, z: Complex64) -> (usize, usize) {
        let i = ((z.re - self.bbox.min_x) / self.cell).floor();
        let j = ((z.im - self.bbox.min_y) / self.cell).floor();
        (
            (i.max(0.0) as usize).min(self.nx - 1),
            (j.max(0.0) as usize).min(self.ny - 1),
        )
    }

    pub fn len(&self) -> usize {
        self.segs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    /// Distance from `z` to the nearest indexed segment.
    pub fn distance(&self, z: Complex64) -> f64 {
        if self.segs.is_empty() {
            return f64::INFINITY;
        }
        // distance to the box bounds how far out the search must start
        let dx = (self.bbox.min_x - z.re).max(z.re - self.bbox.max_x).max(0.0);
        let dy = (self.bbox.min_y - z.im).max(z.im - self.bbox.max_y).max(0.0);
        let outside = dx.hypot(dy);
        let (ci, cj) = self.cell_of(z);
        let mut best = f64::INFINITY;
        let max_ring = self.nx.max(self.ny);
        for ring in 0..=max_ring {
            let reach = outside.max((ring as f64 - 1.0).max(0.0) * self.cell);
            if best <= reach {
                break;
            }
            self.visit_ring(ci, cj, ring, |k| {
                let (a, b) = self.segs[k];
                best = best.min(point_segment_distance(z, a, b));
            });
        }
        best
    }

    /// True when some segment lies within `r` of `z`.
    pub fn within(&self, z: Complex64, r: f64) -> bool {
        if !self.bbox.contains(z, r) {
            return false;
        }
        let (i0, j0) = self.cell_of(z - Complex64::new(r, r));
        let (i1, j1) = self.cell_of(z + Complex64::new(r, r));
        for j in j0..=j1 {
            for i in i0..=i1 {
                for &k in &self.buckets[j * self.nx + i] {
                    let (a, b) = self.segs[k as usize];
                    if point_segment_distance(z, a, b) <= r {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Minimum distance between `poly` (closed) and the indexed segments.
    pub fn distance_to_polyline(&self, poly: &[Complex64]) -> f64 {
        let n = poly.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            best = best.min(self.distance(a));
            if best == 0.0 {
                return 0.0;
            }
            if self.crosses(a, b) {
                return 0.0;
            }
        }
        best
    }

    /// True when segment `ab` properly crosses an indexed segment.
    pub fn crosses(&self, a: Complex64, b: Complex64) -> bool {
        let lo = Complex64::new(a.re.min(b.re), a.im.min(b.im));
        let hi = Complex64::new(a.re.max(b.re), a.im.max(b.im));
        let sb = BBox { min_x: lo.re, min_y: lo.im, max_x: hi.re, max_y: hi.im };
        if !sb.overlaps(&self.bbox, 0.0) {
            return false;
        }
        let (i0, j0) = self.cell_of(lo);
        let (i1, j1) = self.cell_of(hi);
        for j in j0..=j1 {
            for i in i0..=i1 {
                for &k in &self.buckets[j * self.nx + i] {
                    let (c, d) = self.segs[k as usize];
                    if segments_intersect(a, b, c, d) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn visit_ring(&self, ci: usize, cj: usize, ring: usize, mut f: impl FnMut(usize)) {
        let (ci, cj, r) = (ci as isize, cj as isize, ring as isize);
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        let mut cell = |i: isize, j: isize| {
            if i >= 0 && j >= 0 && i < nx && j < ny {
                for &k in &self.buckets[(j * nx + i) as usize] {
                    f(k as usize);
                }
            }
        };
        if r == 0 {
            cell(ci, cj);
            return;
        }
        for i in (ci - r)..=(ci + r) {
            cell(i, cj - r);
            cell(i, cj + r);
        }
        for j in (cj - r + 1)..=(cj + r - 1) {
            cell(ci - r, j);
            cell(ci + r, j);
        }
    }
}

/// Minimum distance between two closed polylines.
pub fn polyline_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ib = SegmentIndex::closed(b);
    let ia = SegmentIndex::closed(a);
    let d1 = ib.distance_to_polyline(a);
    if d1 == 0.0 {
        return 0.0;
    }
    let d2 = b.iter().map(|&z| ia.distance(z)).fold(f64::INFINITY, f64::min);
    d1.min(d2)
}

/// Groups points into clusters whose members chain within `radius`.
pub fn cluster_points(points: &[Complex64], radius: f64) -> Vec<Vec<Complex64>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        let mut k = i;
        while l[k] != r {
            let nxt = l[k];
            l[k] = r;
            k = nxt;
        }
        r
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| points[i].re.total_cmp(&points[j].re));
    for a in 0..n {
        for b in (a + 1)..n {
            let (i, j) = (order[a], order[b]);
            if points[j].re - points[i].re > radius {
                break;
            }
            if (points[i] - points[j]).norm() <= radius {
                let (ri, rj) = (find(&mut label, i), find(&mut label, j));
                if ri != rj {
                    label[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for i in 0..n {
        let r = find(&mut label, i);
        groups.entry(r).or_default().push(points[i]);
    }
    groups.into_values().collect()
}

pub fn circle(center: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| center + Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn winding_of_square() {
        let sq = vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        assert_eq!(winding_number(&sq, c(0.5, 0.5)), 1);
        assert_eq!(winding_number(&sq, c(1.5, 0.5)), 0);
        let rev: Vec<_> = sq.iter().rev().copied().collect();
        assert_eq!(winding_number(&rev, c(0.5, 0.5)), -1);
        assert!((signed_area(&sq) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn index_distance_matches_brute_force() {
        let poly = circle(c(0.3, -0.2), 1.7, 500);
        let idx = SegmentIndex::closed(&poly);
        for k in 0..200 {
            let z = c((k as f64 * 0.37).sin() * 3.0, (k as f64 * 0.91).cos() * 3.0);
            let brute = (0..poly.len())
                .map(|i| point_segment_distance(z, poly[i], poly[(i + 1) % poly.len()]))
                .fold(f64::INFINITY, f64::min);
            assert!((idx.distance(z) - brute).abs() < 1e-14);
            assert_eq!(idx.within(z, 0.1), brute <= 0.1);
        }
    }

    #[test]
    fn polyline_distance_of_circles() {
        let a = circle(c(0.0, 0.0), 1.0, 720);
        let b = circle(c(0.0, 0.0), 2.0, 720);
        assert!((polyline_distance(&a, &b) - 1.0).abs() < 1e-3);
        let d = circle(c(1.5, 0.0), 1.0, 720);
        assert_eq!(polyline_distance(&a, &d), 0.0);
    }

    #[test]
    fn clusters() {
        let pts = vec![c(0.0, 0.0), c(0.05, 0.0), c(0.1, 0.0), c(5.0, 5.0)];
        let g = cluster_points(&pts, 0.06);
        assert_eq!(g.len(), 2);
    }
}
