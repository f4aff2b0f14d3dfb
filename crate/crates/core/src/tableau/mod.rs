//! Critical tableau of the orbit of 0 relative to the critical puzzle pieces.
//!
//! Row `d` column `k` records where `z_k = f^k(0)` sits: inside `P_d(0)`
//! (critical), inside `P_{d-1}(0)` only (semi-critical), or outside
//! `P_{d-1}(0)` (off-critical). Row 0 has no off-critical entries.

mod kneading;

pub use kneading::{angle_from_signs, fibonacci_angle, fibonacci_signs, kneading_marks};

use crate::puzzle::{LocateError, Puzzle};
use crate::rays::{Angle, AngleCycle};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Position of an orbit point relative to the critical pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mark {
    Critical,
    SemiCritical,
    OffCritical,
}

impl Mark {
    pub fn symbol(self) -> char {
        match self {
            Mark::Critical => 'C',
            Mark::SemiCritical => 'S',
            Mark::OffCritical => 'O',
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableauError {
    #[error("entry ({depth}, {column}) is unresolvable: {cause}")]
    Unresolvable { depth: usize, column: usize, cause: LocateError },
    #[error("window of depth {depth} and width {width} is too shallow")]
    WindowTooShallow { depth: usize, width: usize },
    #[error("puzzle has depth {built}, {needed} needed")]
    PuzzleTooShallow { built: usize, needed: usize },
    #[error("rows have unequal lengths")]
    Ragged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TableauSource {
    Geometric { c: [f64; 2], limb: String },
    Kneading { theta: String, limb: String },
    Explicit,
}

/// Marks for depths `0..=depth` and orbit columns `0..width`; `None` is an
/// unresolvable entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tableau {
    pub depth: usize,
    pub width: usize,
    pub source: TableauSource,
    marks: Vec<Vec<Option<Mark>>>,
}

/// `A_{child_depth}(0)` covers `A_{parent_depth}(0)` by `f^iterate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ChildLink {
    pub child_depth: usize,
    pub parent_depth: usize,
    pub iterate: usize,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChildSearch {
    pub parent_depth: usize,
    pub links: Vec<ChildLink>,
    /// Largest iterate examined.
    pub searched_to: usize,
    /// Iterates whose verdict depended on an unresolvable entry.
    pub conditional: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceVerdict {
    pub recurrent_so_far: bool,
    pub window_depth: usize,
    pub window_width: usize,
    /// Deepest critical row per column `k ≥ 1`.
    pub critical_depths: Vec<Option<usize>>,
    /// `(column, depth)` at which the running maximum grows.
    pub witnesses: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicityVerdict {
    pub periodic_so_far: bool,
    pub window_depth: usize,
    pub window_width: usize,
    /// First column `k ≥ 1` critical at every row.
    pub column: Option<usize>,
}

impl Tableau {
    pub fn from_marks(marks: Vec<Vec<Option<Mark>>>) -> Result<Tableau, TableauError> {
        let width = marks.first().map_or(0, Vec::len);
        if marks.is_empty() || marks.iter().any(|r| r.len() != width) {
            return Err(TableauError::Ragged);
        }
        Ok(Tableau { depth: marks.len() - 1, width, source: TableauSource::Explicit, marks })
    }

    /// Parses rows of `C`, `S`, `O`, `U` characters.
    pub fn from_rows(rows: &[&str]) -> Result<Tableau, TableauError> {
        let marks = rows
            .iter()
            .map(|r| {
                r.chars()
                    .map(|ch| match ch {
                        'C' => Some(Mark::Critical),
                        'S' => Some(Mark::SemiCritical),
                        'O' => Some(Mark::OffCritical),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        Tableau::from_marks(marks)
    }

    /// Exact tableau of the critical value angle `theta` in the limb of `cycle`.
    pub fn kneading(theta: &Angle, cycle: &AngleCycle, depth: usize, width: usize) -> Tableau {
        Tableau {
            depth,
            width,
            source: TableauSource::Kneading { theta: theta.to_string(), limb: cycle.rotation.to_string() },
            marks: kneading_marks(theta, cycle, depth, width),
        }
    }

    /// Tableau of the critical orbit located in `puzzle`.
    pub fn build(puzzle: &Puzzle, depth: usize, width: usize) -> Result<Tableau, TableauError> {
        if puzzle.depth() < depth {
            return Err(TableauError::PuzzleTooShallow { built: puzzle.depth(), needed: depth });
        }
        let orbit = puzzle.param.critical_orbit(width.max(1));
        let crit = puzzle.critical_chain();
        let columns: Vec<Vec<Option<Mark>>> =
            orbit.points.par_iter().take(width).map(|&z| column_marks(puzzle, &crit, z, depth)).collect();
        let marks = (0..=depth).map(|d| columns.iter().map(|c| c[d]).collect()).collect();
        let c = puzzle.param.c;
        let limb = puzzle.alpha_cycle.rotation.to_string();
        Ok(Tableau { depth, width, source: TableauSource::Geometric { c: [c.re, c.im], limb }, marks })
    }

    pub fn mark(&self, d: usize, k: usize) -> Option<Mark> {
        self.marks.get(d).and_then(|r| r.get(k)).copied().flatten()
    }

    pub fn rows(&self) -> &[Vec<Option<Mark>>] {
        &self.marks
    }

    pub fn unresolvable_fraction(&self) -> f64 {
        let total = (self.depth + 1) * self.width;
        let bad = self.marks.iter().flatten().filter(|m| m.is_none()).count();
        bad as f64 / total.max(1) as f64
    }

    /// Columns breaking the rule: critical entries, then at most one
    /// semi-critical entry, then off-critical entries only.
    pub fn column_rule_violations(&self) -> Vec<usize> {
        (0..self.width)
            .filter(|&k| {
                // false while still in the critical run
                let mut past = false;
                (0..=self.depth).filter_map(|d| self.mark(d, k)).any(|m| match (past, m) {
                    (false, Mark::Critical) | (true, Mark::OffCritical) => false,
                    (false, _) => {
                        past = true;
                        false
                    }
                    (true, _) => true,
                })
            })
            .collect()
    }

    /// Entries contradicting `mark(e, j + i) = mark(e, i)` for `e ≤ d - i`
    /// whenever `(d, j)` is critical.
    pub fn north_east_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 1..self.width {
            let Some(d) = self.critical_depth(j) else { continue };
            for i in 0..=d {
                if j + i >= self.width {
                    break;
                }
                for e in 0..=d - i {
                    if let (Some(a), Some(b)) = (self.mark(e, j + i), self.mark(e, i)) {
                        if a != b {
                            out.push((e, j + i));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Deepest row at which column `k` is critical.
    pub fn critical_depth(&self, k: usize) -> Option<usize> {
        (0..=self.depth).take_while(|&d| self.mark(d, k) == Some(Mark::Critical)).last()
    }

    /// Recurrent so far when some column is critical through the whole
    /// window or the record critical depth still grows in the second half
    /// of the columns.
    pub fn is_recurrent(&self) -> RecurrenceVerdict {
        let critical_depths: Vec<Option<usize>> = (1..self.width).map(|k| self.critical_depth(k)).collect();
        let mut witnesses = Vec::new();
        let mut best: Option<usize> = None;
        for (i, cd) in critical_depths.iter().enumerate() {
            if let Some(d) = *cd {
                if best.is_none_or(|b| d > b) {
                    best = Some(d);
                    witnesses.push((i + 1, d));
                }
            }
        }
        // still growing: a new record in the second half of the columns
        let late = witnesses.last().is_some_and(|w: &(usize, usize)| 2 * w.0 >= self.width);
        RecurrenceVerdict {
            recurrent_so_far: best == Some(self.depth) || (late && witnesses.len() >= 2),
            window_depth: self.depth,
            window_width: self.width,
            critical_depths,
            witnesses,
        }
    }

    pub fn is_periodic(&self) -> PeriodicityVerdict {
        let column = (1..self.width).find(|&k| self.critical_depth(k) == Some(self.depth));
        PeriodicityVerdict {
            periodic_so_far: column.is_some(),
            window_depth: self.depth,
            window_width: self.width,
            column,
        }
    }

    /// Children `A_{d+n}(0)` of `A_d(0)`: `f^n` carries `A_{d+n}(0)` onto
    /// `A_d(z_n) = A_d(0)` and every intermediate image misses the critical piece.
    pub fn children_of(&self, d: usize) -> Result<ChildSearch, TableauError> {
        let shallow = TableauError::WindowTooShallow { depth: self.depth, width: self.width };
        // A_{d+n} needs rows up to d + n + 1
        if self.depth < d + 2 || self.width < 2 {
            return Err(shallow);
        }
        let n_max = (self.depth - d - 1).min(self.width - 1);
        let mut links = Vec::new();
        let mut conditional = Vec::new();
        for n in 1..=n_max {
            let dp = d + n;
            let mut verdict = match self.mark(d + 1, n) {
                Some(Mark::Critical) => Some(true),
                Some(_) => Some(false),
                None => None,
            };
            for k in 1..n {
                if verdict == Some(false) {
                    break;
                }
                match self.mark(dp - k, k) {
                    Some(Mark::Critical) => verdict = Some(false),
                    Some(_) => {}
                    None => verdict = None,
                }
            }
            match verdict {
                Some(true) => links.push(ChildLink { child_depth: dp, parent_depth: d, iterate: n, degree: 2 }),
                None => conditional.push(n),
                Some(false) => {}
            }
        }
        Ok(ChildSearch { parent_depth: d, links, searched_to: n_max, conditional })
    }

    /// A child is excellent when it has at least two children. Fewer than
    /// two inside the window is undecided, not a negative verdict.
    pub fn is_excellent(&self, link: &ChildLink) -> Result<bool, TableauError> {
        let found = self.children_of(link.child_depth)?;
        if found.links.len() >= 2 {
            Ok(true)
        } else {
            Err(TableauError::WindowTooShallow { depth: self.depth, width: self.width })
        }
    }

    /// Shallowest child certified excellent inside the window.
    pub fn first_excellent_child(&self) -> Option<ChildLink> {
        let mut best: Option<ChildLink> = None;
        for d in 0..self.depth {
            let Ok(search) = self.children_of(d) else { break };
            for link in search.links {
                if best.is_some_and(|b| b.child_depth <= link.child_depth) {
                    continue;
                }
                if self.is_excellent(&link) == Ok(true) {
                    best = Some(link);
                }
            }
        }
        best
    }

    /// Rows as CSV, one line per depth.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("depth");
        for k in 0..self.width {
            s.push_str(&format!(",{k}"));
        }
        s.push('\n');
        for (d, row) in self.marks.iter().enumerate() {
            s.push_str(&d.to_string());
            for m in row {
                s.push(',');
                s.push(m.map_or('U', Mark::symbol));
            }
            s.push('\n');
        }
        s
    }
}

/// Marks of one orbit point at depths `0..=depth`.
fn column_marks(puzzle: &Puzzle, crit: &[usize], z: num_complex::Complex64, depth: usize) -> Vec<Option<Mark>> {
    let (chain, err) = puzzle.locate_chain(z, depth);
    let critical_at = |d: usize| chain[d] == crit[d];
    let mut out = Vec::with_capacity(depth + 1);
    for d in 0..=depth {
        let mark = if d < chain.len() {
            if critical_at(d) {
                Some(Mark::Critical)
            } else if d == 0 || critical_at(d - 1) {
                Some(Mark::SemiCritical)
            } else {
                Some(Mark::OffCritical)
            }
        } else {
            let e = chain.len();
            let off_before = e >= 1 && !critical_at(e - 1);
            match err {
                _ if off_before => Some(Mark::OffCritical),
                Some(LocateError::OutsidePuzzle { .. }) if d == e => Some(Mark::SemiCritical),
                Some(LocateError::OutsidePuzzle { .. }) => Some(Mark::OffCritical),
                _ => None,
            }
        };
        out.push(mark);
    }
    out
}

/// Mark of `z_j` at depth `d`.
pub fn classify(puzzle: &Puzzle, d: usize, j: usize) -> Result<Mark, TableauError> {
    if puzzle.depth() < d {
        return Err(TableauError::PuzzleTooShallow { built: puzzle.depth(), needed: d });
    }
    let z = *puzzle.param.critical_orbit(j + 1).points.last().expect("non-empty orbit");
    let crit = puzzle.critical_chain();
    match column_marks(puzzle, &crit, z, d)[d] {
        Some(m) => Ok(m),
        None => {
            let (_, err) = puzzle.locate_chain(z, d);
            Err(TableauError::Unresolvable {
                depth: d,
                column: j,
                cause: err.unwrap_or(LocateError::OnBoundary { depth: d, distance: 0.0 }),
            })
        }
    }
}

#[cfg(test)]
mod tests;
