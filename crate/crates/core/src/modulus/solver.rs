//! Symmetric sparse solve: conjugate gradients preconditioned by an
//! aggregation multigrid V-cycle.

/// Compressed sparse rows.
#[derive(Debug, Clone)]
pub(crate) struct Csr {
    pub n: usize,
    pub ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl Csr {
    /// Builds from per-row `(col, val)` lists; duplicate columns are summed.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Csr {
        let n = rows.len();
        let mut ptr = Vec::with_capacity(n + 1);
        let mut col = Vec::new();
        let mut val = Vec::new();
        ptr.push(0);
        for mut r in rows {
            r.sort_by_key(|e| e.0);
            let mut last = usize::MAX;
            for (c, v) in r {
                if c == last {
                    *val.last_mut().expect("entry exists") += v;
                } else {
                    col.push(c);
                    val.push(v);
                    last = c;
                }
            }
            ptr.push(col.len());
        }
        Csr { n, ptr, col, val }
    }

    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.ptr[i]..self.ptr[i + 1] {
                s += self.val[k] * x[self.col[k]];
            }
            y[i] = s;
        }
    }

    fn diag(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| (self.ptr[i]..self.ptr[i + 1]).find(|&k| self.col[k] == i).map_or(0.0, |k| self.val[k]))
            .collect()
    }

    /// `scale * Pᵀ A P` for the piecewise-constant prolongation `agg`.
    fn galerkin(&self, agg: &[usize], n_coarse: usize, scale: f64) -> Csr {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_coarse];
        for i in 0..self.n {
            let ci = agg[i];
            for k in self.ptr[i]..self.ptr[i + 1] {
                rows[ci].push((agg[self.col[k]], scale * self.val[k]));
            }
        }
        Csr::from_rows(rows)
    }

    fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for k in self.ptr[i]..self.ptr[i + 1] {
                d[i * self.n + self.col[k]] = self.val[k];
            }
        }
        d
    }
}

struct Level {
    a: Csr,
    diag: Vec<f64>,
    agg: Vec<usize>,
}

/// V-cycle hierarchy built from 2×2 aggregation of grid positions.
pub(crate) struct Multigrid {
    levels: Vec<Level>,
    coarse: Csr,
    chol: Vec<f64>,
}

const COARSEST: usize = 400;
/// Rescales the Galerkin operator of constant aggregates, which is twice
/// too stiff for a 2D Laplacian.
const COARSE_SCALE: f64 = 0.5;

impl Multigrid {
    pub fn new(a: Csr, positions: &[(usize, usize)]) -> Multigrid {
        let mut levels = Vec::new();
        let mut a = a;
        let mut pos: Vec<(usize, usize)> = positions.to_vec();
        while a.n > COARSEST {
            let mut ids = std::collections::HashMap::new();
            let mut agg = Vec::with_capacity(a.n);
            let mut next_pos = Vec::new();
            for &(i, j) in &pos {
                let key = (i / 2, j / 2);
                let id = *ids.entry(key).or_insert_with(|| {
                    next_pos.push(key);
                    next_pos.len() - 1
                });
                agg.push(id);
            }
            let nc = next_pos.len();
            if nc * 10 > a.n * 9 {
                break;
            }
            let coarse = a.galerkin(&agg, nc, COARSE_SCALE);
            let diag = a.diag();
            levels.push(Level { a, diag, agg });
            a = coarse;
            pos = next_pos;
        }
        let chol = cholesky(&a.to_dense(), a.n);
        Multigrid { levels, coarse: a, chol }
    }

    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        self.cycle(0, r, z);
    }

    fn cycle(&self, l: usize, r: &[f64], x: &mut [f64]) {
        if l == self.levels.len() {
            x.copy_from_slice(r);
            cholesky_solve(&self.chol, self.coarse.n, x);
            return;
        }
        let lv = &self.levels[l];
        x.iter_mut().for_each(|v| *v = 0.0);
        gauss_seidel(&lv.a, &lv.diag, r, x, true);
        let mut res = vec![0.0; lv.a.n];
        lv.a.mul(x, &mut res);
        let nc = if l + 1 == self.levels.len() { self.coarse.n } else { self.levels[l + 1].a.n };
        let mut rc = vec![0.0; nc];
        for i in 0..lv.a.n {
            rc[lv.agg[i]] += r[i] - res[i];
        }
        let mut ec = vec![0.0; nc];
        self.cycle(l + 1, &rc, &mut ec);
        for i in 0..lv.a.n {
            x[i] += ec[lv.agg[i]];
        }
        gauss_seidel(&lv.a, &lv.diag, r, x, false);
    }
}

/// One forward or backward Gauss-Seidel sweep.
fn gauss_seidel(a: &Csr, diag: &[f64], b: &[f64], x: &mut [f64], forward: bool) {
    let mut step = |i: usize| {
        let mut s = b[i];
        for k in a.ptr[i]..a.ptr[i + 1] {
            let c = a.col[k];
            if c != i {
                s -= a.val[k] * x[c];
            }
        }
        x[i] = s / diag[i];
    };
    if forward {
        (0..a.n).for_each(&mut step);
    } else {
        (0..a.n).rev().for_each(&mut step);
    }
}

fn cholesky(a: &[f64], n: usize) -> Vec<f64> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        let d = d.max(f64::MIN_POSITIVE).sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    l
}

fn cholesky_solve(l: &[f64], n: usize, x: &mut [f64]) {
    for i in 0..n {
        let mut s = x[i];
        for k in 0..i {
            s -= l[i * n + k] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Outcome of a preconditioned CG solve.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Solves `A x = b` to relative residual `tol`, starting from `x`.
pub(crate) fn pcg(a: &Csr, mg: &Multigrid, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> SolveStats {
    let n = a.n;
    let bnorm = dot(b, b).sqrt().max(f64::MIN_POSITIVE);
    let mut r = vec![0.0; n];
    a.mul(x, &mut r);
    r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
    let mut z = vec![0.0; n];
    mg.apply(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut rel = dot(&r, &r).sqrt() / bnorm;
    let mut it = 0;
    while rel > tol && it < max_iter {
        a.mul(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rel = dot(&r, &r).sqrt() / bnorm;
        it += 1;
        if rel <= tol {
            break;
        }
        mg.apply(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    SolveStats { iterations: it, relative_residual: rel }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dirichlet Laplacian on an `m × m` interior grid.
    fn laplacian(m: usize) -> (Csr, Vec<(usize, usize)>) {
        let id = |i: usize, j: usize| i * m + j;
        let mut rows = Vec::new();
        let mut pos = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let mut r = vec![(id(i, j), 4.0)];
                if i > 0 {
                    r.push((id(i - 1, j), -1.0));
                }
                if i + 1 < m {
                    r.push((id(i + 1, j), -1.0));
                }
                if j > 0 {
                    r.push((id(i, j - 1), -1.0));
                }
                if j + 1 < m {
                    r.push((id(i, j + 1), -1.0));
                }
                rows.push(r);
                pos.push((i, j));
            }
        }
        (Csr::from_rows(rows), pos)
    }

    #[test]
    fn dense_cholesky_solves() {
        let (a, _) = laplacian(5);
        let l = cholesky(&a.to_dense(), a.n);
        let b: Vec<f64> = (0..a.n).map(|i| (i as f64).sin()).collect();
        let mut x = b.clone();
        cholesky_solve(&l, a.n, &mut x);
        let mut ax = vec![0.0; a.n];
        a.mul(&x, &mut ax);
        for (u, v) in ax.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn pcg_converges_quickly() {
        for m in [64, 256] {
            let (a, pos) = laplacian(m);
            let mg = Multigrid::new(a.clone(), &pos);
            let b = vec![1.0; a.n];
            let mut x = vec![0.0; a.n];
            let s = pcg(&a, &mg, &b, &mut x, 1e-10, 500);
            assert!(s.relative_residual <= 1e-10);
            assert!(s.iterations < 60, "m={m}: {} iterations", s.iterations);
        }
    }
}
