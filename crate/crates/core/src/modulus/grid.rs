//! Uniform-grid rasterization of an annular region.

use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CellClass {
    /// Unknown node strictly between the two curves.
    Interior,
    /// Node beyond the outer curve next to an interior node.
    OuterBoundary,
    /// Node inside the inner curve next to an interior node.
    InnerBoundary,
    Exterior,
}

/// Which side of the region a non-interior node is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Inside,
    Outside,
    Hole,
}

const PAD: usize = 2;

/// Crossings of one closed curve with grid rows and columns, in grid units.
#[derive(Debug, Clone)]
struct Crossings {
    rows: Vec<Vec<f64>>,
    cols: Vec<Vec<f64>>,
}

impl Crossings {
    fn of(curve: &[Complex64], n: usize) -> Crossings {
        let mut rows = vec![Vec::new(); n];
        let mut cols = vec![Vec::new(); n];
        let m = curve.len();
        for k in 0..m {
            let (a, b) = (curve[k], curve[(k + 1) % m]);
            push_crossings(a.im, b.im, a.re, b.re, &mut rows);
            push_crossings(a.re, b.re, a.im, b.im, &mut cols);
        }
        for v in rows.iter_mut().chain(cols.iter_mut()) {
            v.sort_by(f64::total_cmp);
        }
        Crossings { rows, cols }
    }

    /// Even-odd membership of grid node `(i, j)`.
    fn inside(&self, i: usize, j: usize) -> bool {
        self.rows[j].partition_point(|&x| x < i as f64) % 2 == 1
    }

    /// Distance from node `(i, j)` to the nearest crossing along the edge
    /// towards `(i + di, j + dj)`, in cells.
    fn edge_fraction(&self, i: usize, j: usize, di: isize, dj: isize) -> Option<f64> {
        let (line, from) = if dj == 0 { (&self.rows[j], i as f64) } else { (&self.cols[i], j as f64) };
        let dir = (di + dj) as f64;
        let to = from + dir;
        let (lo, hi) = if dir > 0.0 { (from, to) } else { (to, from) };
        let s = line.partition_point(|&x| x < lo);
        let e = line.partition_point(|&x| x <= hi);
        line[s..e].iter().map(|&x| (x - from).abs()).min_by(f64::total_cmp)
    }
}

/// Records where segment `(u0, v0)-(u1, v1)` crosses the integer lines
/// `u = k`, half-open in `u`.
fn push_crossings(u0: f64, u1: f64, v0: f64, v1: f64, lines: &mut [Vec<f64>]) {
    if u0 == u1 {
        return;
    }
    let (lo, hi) = if u0 < u1 { (u0, u1) } else { (u1, u0) };
    let start = lo.ceil().max(0.0) as usize;
    let mut k = start;
    while k < lines.len() && (k as f64) < hi {
        let t = (k as f64 - u0) / (u1 - u0);
        lines[k].push(v0 + t * (v1 - v0));
        k += 1;
    }
}

/// N×N node grid over the outer curve's bounding box, with both curves
/// rasterized by even-odd fill.
#[derive(Debug, Clone)]
pub struct GridDiscretization {
    pub origin: Complex64,
    pub spacing: f64,
    pub resolution: usize,
    pub cells: Vec<CellClass>,
    sides: Vec<Side>,
    outer: Crossings,
    inner: Crossings,
}

impl GridDiscretization {
    pub fn new(outer: &[Complex64], inner: &[Complex64], resolution: usize) -> GridDiscretization {
        let n = resolution;
        let bb = crate::geometry::BBox::of(outer);
        let span = bb.width().max(bb.height()).max(f64::MIN_POSITIVE);
        let h = span / (n - 1 - 2 * PAD) as f64;
        let center = Complex64::new((bb.min_x + bb.max_x) / 2.0, (bb.min_y + bb.max_y) / 2.0);
        let half = h * (n - 1) as f64 / 2.0;
        let origin = center - Complex64::new(half, half);
        let to_grid = |z: &Complex64| (z - origin) / h;
        let og: Vec<Complex64> = outer.iter().map(to_grid).collect();
        let ig: Vec<Complex64> = inner.iter().map(to_grid).collect();
        let outer = Crossings::of(&og, n);
        let inner = Crossings::of(&ig, n);
        let mut sides = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                sides.push(if inner.inside(i, j) {
                    Side::Hole
                } else if outer.inside(i, j) {
                    Side::Inside
                } else {
                    Side::Outside
                });
            }
        }
        let mut cells = vec![CellClass::Exterior; n * n];
        for j in 0..n {
            for i in 0..n {
                let k = j * n + i;
                if sides[k] == Side::Inside {
                    cells[k] = CellClass::Interior;
                    for (di, dj) in NEIGHBOURS {
                        let (a, b) = ((i as isize + di) as usize, (j as isize + dj) as usize);
                        let q = b * n + a;
                        match sides[q] {
                            Side::Outside => cells[q] = CellClass::OuterBoundary,
                            Side::Hole => cells[q] = CellClass::InnerBoundary,
                            Side::Inside => {}
                        }
                    }
                }
            }
        }
        GridDiscretization { origin, spacing: h, resolution: n, cells, sides, outer, inner }
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        self.origin + Complex64::new(i as f64, j as f64) * self.spacing
    }

    pub fn count(&self, class: CellClass) -> usize {
        self.cells.iter().filter(|&&c| c == class).count()
    }

    pub(crate) fn side(&self, i: usize, j: usize) -> Side {
        self.sides[j * self.resolution + i]
    }

    /// Fraction of the edge from interior node `(i, j)` to its neighbour
    /// `(i + di, j + dj)` before the boundary is met.
    pub(crate) fn cut_fraction(&self, i: usize, j: usize, di: isize, dj: isize) -> f64 {
        let (a, b) = ((i as isize + di) as usize, (j as isize + dj) as usize);
        let curve = match self.side(a, b) {
            Side::Hole => &self.inner,
            _ => &self.outer,
        };
        curve.edge_fraction(i, j, di, dj).unwrap_or(1.0).clamp(0.0, 1.0)
    }
}

pub(crate) const NEIGHBOURS: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
