//! Shared helpers for the geometric checks.

use num_complex::Complex64;
use yoccoz::modulus::{covering_ratio_check, CoveringVerdict, ModulusConfig};
use yoccoz::puzzle::{AnnulusRegion, Puzzle};
use yoccoz::tableau::{Mark, Tableau};

/// Region between `∂P_d(z)` and `∂P_{d+2}(z)`.
pub fn two_step(p: &Puzzle, z: Complex64, d: usize) -> Result<AnnulusRegion, String> {
    let outer = p.piece_containing(d, z).map_err(|e| e.to_string())?.reference();
    let inner = p.piece_containing(d + 2, z).map_err(|e| e.to_string())?.reference();
    p.annulus_between(outer, inner).map_err(|e| e.to_string())
}

/// Compares the two-step annulus around `z_j` at depth `d` with its image
/// around `z_{j+1}` at depth `d - 1`. The expected ratio is 2 when `0` lies in
/// `P_{d+2}(z_j)`, 1 when it misses `P_d(z_j)`, and below 2 otherwise.
pub fn orbit_covering(p: &Puzzle, t: &Tableau, j: usize, d: usize, tol: f64, cfg: &ModulusConfig) -> Result<CoveringVerdict, String> {
    let orbit = p.param.critical_orbit(j + 2).points;
    let mark = match (t.mark(d, j), t.mark(d + 2, j)) {
        (_, Some(Mark::Critical)) => Mark::Critical,
        (Some(Mark::Critical), Some(_)) => Mark::SemiCritical,
        (Some(_), Some(_)) => Mark::OffCritical,
        _ => return Err(format!("unresolved mark at ({d}, {j})")),
    };
    let child = two_step(p, orbit[j], d)?;
    let parent = two_step(p, orbit[j + 1], d - 1)?;
    covering_ratio_check(&parent, &child, mark, tol, cfg).map_err(|e| e.to_string())
}

/// Every pair with `j < columns` and `1 <= d <= max_depth`.
pub fn orbit_coverings(p: &Puzzle, t: &Tableau, columns: usize, max_depth: usize, tol: f64, cfg: &ModulusConfig) -> Result<Vec<(usize, usize, CoveringVerdict)>, String> {
    let mut out = Vec::new();
    for j in 0..columns {
        for d in 1..=max_depth {
            out.push((j, d, orbit_covering(p, t, j, d, tol, cfg)?));
        }
    }
    Ok(out)
}
