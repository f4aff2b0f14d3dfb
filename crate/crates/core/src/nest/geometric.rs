//! Nests read off a built puzzle: tree from the geometric tableau, regions
//! from the critical pieces, moduli from the grid solver.

use super::{complementary_annuli, descendant_tree, divergence_report, ComplementaryAnnulus, DescendantTree, DivergenceReport, ModulusValue, NestError};
use crate::modulus::{estimate_modulus, ModulusConfig, ModulusError, ModulusEstimate};
use crate::puzzle::{AnnulusRegion, Puzzle, PuzzleError};
use crate::tableau::Tableau;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct GeometricNest {
    pub tree: DescendantTree,
    pub annuli: Vec<ComplementaryAnnulus>,
    /// `α_j`: between `∂P_{d_j + 1}(0)` and `∂P_{d_{j+2}}(0)`.
    pub regions: Vec<AnnulusRegion>,
    pub estimates: Vec<Result<ModulusEstimate, ModulusError>>,
    /// Deepest puzzle level used.
    pub achieved_depth: usize,
}

impl GeometricNest {
    /// Solver moduli with error bars; failed estimates are unknown.
    pub fn moduli(&self) -> Vec<Option<ModulusValue>> {
        self.estimates
            .iter()
            .map(|e| {
                e.as_ref().ok().map(|e| ModulusValue::Numeric {
                    value: e.value,
                    tolerance: e.uncertainty + e.discretization_error().unwrap_or(0.0),
                })
            })
            .collect()
    }

    pub fn report(&self, batch_count: usize) -> DivergenceReport {
        divergence_report(&self.tree, &self.annuli, &self.moduli(), batch_count)
    }
}

/// Nest of the critical annulus at `root_depth`, or of the shallowest one
/// with two children in the window.
pub fn geometric_nest(
    puzzle: &Puzzle,
    tableau: &Tableau,
    root_depth: Option<usize>,
    config: &ModulusConfig,
) -> Result<GeometricNest, NestError> {
    let root = match root_depth {
        Some(d) => d,
        None => (0..tableau.depth)
            .find(|&d| tableau.children_of(d).is_ok_and(|s| s.links.len() >= 2))
            .ok_or(NestError::NotExcellent { depth: 0, children: 0 })?,
    };
    let mut tree = descendant_tree(tableau, root, None)?;
    // α_j needs the piece at depth d_{j+2}
    tree.complete_depth = tree.complete_depth.min(puzzle.depth());
    let annuli = complementary_annuli(&tree)?;
    let regions = annuli
        .iter()
        .map(|a| {
            let outer = tree.nodes[a.outer].depth + 1;
            let inner = tree.nodes[a.inner].depth;
            let po = puzzle.critical_piece(outer).ok_or(PuzzleError::DepthNotBuilt(outer))?;
            let pi = puzzle.critical_piece(inner).ok_or(PuzzleError::DepthNotBuilt(inner))?;
            puzzle.annulus_between(po.reference(), pi.reference())
        })
        .collect::<Result<Vec<_>, PuzzleError>>()?;
    let estimates: Vec<_> = regions.par_iter().map(|r| estimate_modulus(r, config)).collect();
    let achieved_depth = annuli.last().map_or(root, |a| tree.nodes[a.inner].depth);
    Ok(GeometricNest { tree, annuli, regions, estimates, achieved_depth })
}
