//! Descendant trees of a critical annulus, the dual nest of complementary
//! annuli, ancestor pullbacks and the divergence accounting.
//!
//! Nodes are critical annuli `A_d(0)` identified by their depth `d`. The
//! a-nested sequence `A_0, A_1, …` is the list of tree nodes sorted by depth,
//! and the complementary annulus `α_j` sits between `A_j` and `A_{j+2}` with
//! middle annulus `A_{j+1}`.

mod geometric;
mod synthetic;

pub use geometric::{geometric_nest, GeometricNest};
pub use synthetic::{fibonacci_children, synthetic_nest, BranchingPlan, SyntheticNest, SyntheticSpec, ViolationPlan};

use crate::modulus::ModulusError;
use crate::puzzle::PuzzleError;
use crate::tableau::{Tableau, TableauError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NestError {
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("annulus at depth {depth} has {children} children in the window")]
    NotExcellent { depth: usize, children: usize },
    #[error("not an a-nested sequence: {0}")]
    NotANest(String),
    #[error("forward image of the middle annulus of alpha_{annulus} is not in the tree")]
    ChainUnknown { annulus: usize },
    #[error("alpha_{annulus} has intermediate generation {generation}, below 1")]
    IntermediateGenerationTooLow { annulus: usize, generation: usize },
    #[error("pullback of alpha_{annulus} does not close up: {reason}")]
    AncestorMismatch { annulus: usize, reason: String },
    #[error("no complementary annuli to select from")]
    EmptyInput,
    #[error("annuli of different outer generations")]
    MixedGenerations,
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Puzzle(#[from] PuzzleError),
    #[error(transparent)]
    Modulus(#[from] ModulusError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescendantNode {
    pub generation: usize,
    /// Position in the a-nested sequence.
    pub index: usize,
    pub depth: usize,
    pub parent: Option<usize>,
    /// Iterate carrying this node onto its parent.
    pub iterate: usize,
    pub iterate_to_root: usize,
    /// `2^generation`.
    pub covering_degree: u64,
    pub degenerate: Option<bool>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescendantTree {
    pub root_depth: usize,
    /// Sorted by depth; `nodes[j].index == j`.
    pub nodes: Vec<DescendantNode>,
    /// Every descendant with depth at most this is present.
    pub complete_depth: usize,
    /// Generations known to be complete, when the branching rule is exact.
    pub complete_generations: Option<usize>,
}

impl DescendantTree {
    /// Tree from `(depth, parent depth, iterate)` triples; the root has no parent.
    pub fn from_links(
        root_depth: usize,
        links: &[(usize, usize, usize)],
        complete_depth: usize,
        complete_generations: Option<usize>,
    ) -> Result<DescendantTree, NestError> {
        let mut depths: Vec<usize> = links.iter().map(|l| l.0).collect();
        depths.push(root_depth);
        depths.sort_unstable();
        if depths.windows(2).any(|w| w[0] == w[1]) {
            return Err(NestError::NotANest("two nodes share a depth".into()));
        }
        if depths[0] != root_depth {
            return Err(NestError::NotANest("a node lies above the root".into()));
        }
        let at: HashMap<usize, usize> = depths.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        let mut nodes: Vec<DescendantNode> = depths
            .iter()
            .enumerate()
            .map(|(i, &d)| DescendantNode {
                generation: 0,
                index: i,
                depth: d,
                parent: None,
                iterate: 0,
                iterate_to_root: 0,
                covering_degree: 1,
                degenerate: None,
                children: Vec::new(),
            })
            .collect();
        for &(d, p, n) in links {
            let (i, pi) = match (at.get(&d), at.get(&p)) {
                (Some(&i), Some(&pi)) => (i, pi),
                _ => return Err(NestError::NotANest(format!("parent of depth {d} missing"))),
            };
            if p + n != d {
                return Err(NestError::NotANest(format!("link {p} -> {d} has iterate {n}")));
            }
            nodes[i].parent = Some(pi);
            nodes[i].iterate = n;
            nodes[pi].children.push(i);
        }
        // parents are shallower, so one pass in depth order settles generations
        for i in 1..nodes.len() {
            let p = nodes[i].parent.ok_or_else(|| NestError::NotANest(format!("depth {} is orphaned", nodes[i].depth)))?;
            let g = nodes[p].generation + 1;
            if g >= 64 {
                return Err(NestError::NotANest("generation exceeds 63".into()));
            }
            nodes[i].generation = g;
            nodes[i].iterate_to_root = nodes[p].iterate_to_root + nodes[i].iterate;
            nodes[i].covering_degree = 1 << g;
        }
        Ok(DescendantTree { root_depth, nodes, complete_depth, complete_generations })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of_depth(&self, depth: usize) -> Option<usize> {
        self.nodes.binary_search_by_key(&depth, |n| n.depth).ok()
    }

    pub fn generation_count(&self, g: usize) -> usize {
        self.nodes.iter().filter(|n| n.generation == g).count()
    }

    pub fn max_generation(&self) -> usize {
        self.nodes.iter().map(|n| n.generation).max().unwrap_or(0)
    }

    /// Iterates along the path from `descendant` up to `ancestor`, outermost
    /// step first; `None` when `ancestor` is not on the path.
    pub fn path_iterates(&self, descendant: usize, ancestor: usize) -> Option<Vec<usize>> {
        let mut out = Vec::new();
        let mut i = descendant;
        while i != ancestor {
            out.push(self.nodes[i].iterate);
            i = self.nodes[i].parent?;
        }
        out.reverse();
        Some(out)
    }
}

/// Descendant tree of the critical annulus at `root_depth` read off a
/// tableau, down to `generations` generations (all of them when `None`).
pub fn descendant_tree(tableau: &Tableau, root_depth: usize, generations: Option<usize>) -> Result<DescendantTree, NestError> {
    let root = tableau.children_of(root_depth)?;
    if root.links.len() < 2 {
        return Err(NestError::NotExcellent { depth: root_depth, children: root.links.len() });
    }
    // a child at depth e of a node at d is visible iff e - d <= min(depth - d - 1, width - 1)
    let complete_depth = (tableau.depth - 1).min(root_depth + tableau.width - 1);
    let mut links = Vec::new();
    let mut frontier = vec![(root_depth, 0usize)];
    while let Some((d, g)) = frontier.pop() {
        if generations.is_some_and(|max| g >= max) {
            continue;
        }
        let search = match tableau.children_of(d) {
            Ok(s) => s,
            Err(TableauError::WindowTooShallow { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        for l in search.links {
            if l.child_depth <= complete_depth {
                links.push((l.child_depth, d, l.iterate));
                frontier.push((l.child_depth, g + 1));
            }
        }
    }
    DescendantTree::from_links(root_depth, &links, complete_depth, None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementaryAnnulus {
    /// `j` in `α_j`; also the index of the outer node.
    pub index: usize,
    pub outer: usize,
    pub middle: usize,
    pub inner: usize,
    pub outer_generation: usize,
    pub inner_generation: usize,
    /// Generation of the forward image of the middle annulus; `None` when
    /// that image is not a tree node.
    pub intermediate_generation: Option<usize>,
}

impl ComplementaryAnnulus {
    /// Regions of `α_i` and `α_j` are disjoint iff `|i - j| >= 2`.
    pub fn overlaps(&self, other: &ComplementaryAnnulus) -> bool {
        self.index.abs_diff(other.index) < 2
    }
}

/// Forward image of `α_j` under the iterate carrying its inner annulus onto
/// that annulus's parent: `(K, P', R', Q')` as depths.
fn forward_image(tree: &DescendantTree, j: usize) -> Option<(usize, usize, usize, usize)> {
    let (p, r, q) = (&tree.nodes[j], &tree.nodes[j + 1], &tree.nodes[j + 2]);
    let qp = q.parent?;
    let k = q.iterate;
    Some((k, p.depth.checked_sub(k)?, r.depth.checked_sub(k)?, tree.nodes[qp].depth))
}

/// `α_j` for every `j` whose inner node lies in the complete part of the tree.
pub fn complementary_annuli(tree: &DescendantTree) -> Result<Vec<ComplementaryAnnulus>, NestError> {
    if tree.nodes.windows(2).any(|w| w[0].depth >= w[1].depth) {
        return Err(NestError::NotANest("depths must increase strictly".into()));
    }
    let usable = tree.nodes.iter().take_while(|n| n.depth <= tree.complete_depth).count();
    Ok((0..usable.saturating_sub(2))
        .map(|j| {
            let intermediate_generation = forward_image(tree, j)
                .and_then(|(_, _, r, _)| tree.index_of_depth(r))
                .map(|i| tree.nodes[i].generation);
            ComplementaryAnnulus {
                index: j,
                outer: j,
                middle: j + 1,
                inner: j + 2,
                outer_generation: tree.nodes[j].generation,
                inner_generation: tree.nodes[j + 2].generation,
                intermediate_generation,
            }
        })
        .collect())
}

pub fn intermediate_generation(alpha: &ComplementaryAnnulus) -> Result<usize, NestError> {
    alpha.intermediate_generation.ok_or(NestError::ChainUnknown { annulus: alpha.index })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AncestorLink {
    pub from: usize,
    pub to: usize,
    /// Per-step iterates `k, k₁, …` of the outer pullback chain.
    pub iterates: Vec<usize>,
    pub total_iterate: usize,
    pub pullback_steps: usize,
    pub middle_degree: u64,
    pub outer_generation_from: usize,
    pub outer_generation_to: usize,
}

impl AncestorLink {
    /// `2^{m₁ - m}`.
    pub fn factor(&self) -> BigRational {
        pow2(self.outer_generation_to as i64 - self.outer_generation_from as i64)
    }
}

pub(crate) fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// The unique ancestor of `α_j`: the complementary annulus bounded by the
/// forward images of its outer and inner annuli.
pub fn ancestor_of(tree: &DescendantTree, annuli: &[ComplementaryAnnulus], j: usize) -> Result<AncestorLink, NestError> {
    let alpha = &annuli[j];
    let generation = intermediate_generation(alpha)?;
    if generation < 1 {
        return Err(NestError::IntermediateGenerationTooLow { annulus: j, generation });
    }
    let mismatch = |reason: &str| NestError::AncestorMismatch { annulus: j, reason: reason.into() };
    let (k, pd, rd, qd) = forward_image(tree, j).ok_or(NestError::ChainUnknown { annulus: j })?;
    let pi = tree.index_of_depth(pd).ok_or_else(|| mismatch("outer image is not a tree node"))?;
    let ri = tree.index_of_depth(rd).ok_or_else(|| mismatch("middle image is not a tree node"))?;
    let qi = tree.index_of_depth(qd).expect("parent is a node");
    if ri != pi + 1 || qi != ri + 1 {
        return Err(mismatch("images are not consecutive"));
    }
    if pi >= annuli.len() || annuli[pi].index != pi {
        return Err(mismatch("ancestor lies outside the window"));
    }
    let iterates = tree.path_iterates(alpha.outer, pi).ok_or_else(|| mismatch("outer image is not an ancestor"))?;
    if iterates.iter().sum::<usize>() != k {
        return Err(mismatch("outer iterates do not add up"));
    }
    let middle = tree.path_iterates(alpha.middle, ri).ok_or_else(|| mismatch("middle image is not an ancestor"))?;
    if middle.iter().sum::<usize>() != k {
        return Err(mismatch("middle iterates do not add up"));
    }
    let steps = iterates.len();
    let d = 1u64 << middle.len();
    if !(2..=1u64 << steps).contains(&d) {
        return Err(mismatch("middle degree out of range"));
    }
    Ok(AncestorLink {
        from: j,
        to: pi,
        iterates,
        total_iterate: k,
        pullback_steps: steps,
        middle_degree: d,
        outer_generation_from: alpha.outer_generation,
        outer_generation_to: annuli[pi].outer_generation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrandAncestor {
    pub annulus: usize,
    pub chain: Vec<AncestorLink>,
    /// Product of the per-step factors, `2^{m_N - m}`.
    pub factor: BigRational,
}

/// Follow ancestors until the inner generation can drop no further.
pub fn grand_ancestor(tree: &DescendantTree, annuli: &[ComplementaryAnnulus], j: usize) -> Result<GrandAncestor, NestError> {
    let mut chain = vec![ancestor_of(tree, annuli, j)?];
    loop {
        let to = chain.last().expect("non-empty").to;
        match ancestor_of(tree, annuli, to) {
            Ok(link) => chain.push(link),
            Err(NestError::ChainUnknown { .. } | NestError::IntermediateGenerationTooLow { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let factor = chain.iter().map(AncestorLink::factor).fold(BigRational::one(), |a, b| a * b);
    Ok(GrandAncestor { annulus: chain.last().expect("non-empty").to, chain, factor })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Keep the annuli whose inner index has the majority parity (ties go to
/// even); these are pairwise disjoint.
pub fn select_nonoverlapping(annuli: &[&ComplementaryAnnulus]) -> Result<(Parity, Vec<usize>), NestError> {
    let first = annuli.first().ok_or(NestError::EmptyInput)?;
    if annuli.iter().any(|a| a.outer_generation != first.outer_generation) {
        return Err(NestError::MixedGenerations);
    }
    let (even, odd): (Vec<usize>, Vec<usize>) = annuli.iter().map(|a| a.index).partition(|j| (j + 2) % 2 == 0);
    Ok(if even.len() >= odd.len() { (Parity::Even, even) } else { (Parity::Odd, odd) })
}

/// A modulus carried by an annulus: exact in synthetic mode, a solver
/// estimate with an error bar in geometric mode.
#[derive(Debug, Clone, PartialEq)]
pub enum ModulusValue {
    Exact(BigRational),
    Numeric { value: f64, tolerance: f64 },
}

impl ModulusValue {
    pub fn zero() -> ModulusValue {
        ModulusValue::Exact(BigRational::zero())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ModulusValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            ModulusValue::Numeric { value, .. } => *value,
        }
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            ModulusValue::Exact(_) => 0.0,
            ModulusValue::Numeric { tolerance, .. } => *tolerance,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ModulusValue::Exact(_))
    }

    pub fn add(&self, other: &ModulusValue) -> ModulusValue {
        match (self, other) {
            (ModulusValue::Exact(a), ModulusValue::Exact(b)) => ModulusValue::Exact(a + b),
            _ => ModulusValue::Numeric { value: self.to_f64() + other.to_f64(), tolerance: self.tolerance() + other.tolerance() },
        }
    }

    pub fn scale(&self, factor: &BigRational) -> ModulusValue {
        match self {
            ModulusValue::Exact(a) => ModulusValue::Exact(a * factor),
            ModulusValue::Numeric { value, tolerance } => {
                let f = factor.to_f64().unwrap_or(f64::NAN);
                ModulusValue::Numeric { value: value * f, tolerance: tolerance * f }
            }
        }
    }

    /// `self >= other`, exactly or up to the combined tolerance.
    pub fn at_least(&self, other: &ModulusValue) -> bool {
        match (self, other) {
            (ModulusValue::Exact(a), ModulusValue::Exact(b)) => a >= b,
            _ => self.to_f64() + self.tolerance() + other.tolerance() >= other.to_f64(),
        }
    }

    pub fn min<'a>(&'a self, other: &'a ModulusValue) -> &'a ModulusValue {
        match (self, other) {
            (ModulusValue::Exact(a), ModulusValue::Exact(b)) => {
                if a <= b {
                    self
                } else {
                    other
                }
            }
            _ if self.to_f64() <= other.to_f64() => self,
            _ => other,
        }
    }
}

impl fmt::Display for ModulusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModulusValue::Exact(q) => write!(f, "{q}"),
            ModulusValue::Numeric { value, tolerance } => write!(f, "{value:.16e} ± {tolerance:.3e}"),
        }
    }
}

/// Which inequality a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Inequality {
    /// One pullback step: `mod(α) >= 2^{m₁ - m} mod(ancestor)`.
    Onestep,
    /// Many steps: `mod(α) >= 2^{m_N - m} mod(grand ancestor)`.
    Manysteps,
    /// Batch sum at least `M₀/2`.
    BatchBound,
    /// Exactly one middle annulus, and a closing pullback, for every annulus
    /// with intermediate generation at least 1.
    UniqueAncestor,
}

impl Inequality {
    pub fn name(self) -> &'static str {
        match self {
            Inequality::Onestep => "onestep",
            Inequality::Manysteps => "manysteps",
            Inequality::BatchBound => "batch-bound",
            Inequality::UniqueAncestor => "unique-ancestor",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub inequality: Inequality,
    pub annulus: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    pub outer_generation: usize,
    /// Complementary annuli of this outer generation.
    pub candidates: usize,
    /// Candidates dropped for meeting an earlier batch.
    pub excluded: usize,
    pub parity: Parity,
    pub selected: Vec<usize>,
    pub sum: ModulusValue,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    /// `m₀`: the first outer generation from which on every annulus has an ancestor.
    pub first_generation: Option<usize>,
    pub grand_ancestors: Vec<usize>,
    /// `M₀`: least modulus over the grand ancestors.
    pub min_modulus: Option<ModulusValue>,
    pub batches: Vec<Batch>,
    pub requested_batches: usize,
    pub running_total: ModulusValue,
    pub links: Vec<Option<AncestorLink>>,
    pub violations: Vec<Violation>,
    pub exact: bool,
}

impl DivergenceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn complete(&self) -> bool {
        self.batches.len() >= self.requested_batches
    }

    /// `K · M₀ / 2` for the achieved batch count.
    pub fn total_bound(&self) -> Option<ModulusValue> {
        let half = BigRational::new(BigInt::from(self.batches.len()), BigInt::from(2));
        self.min_modulus.as_ref().map(|m| m.scale(&half))
    }
}

/// Accounting over `batch_count` batches of outer generations `m₀ < m₁ < …`.
///
/// `moduli[j]` is the modulus of `α_j` when known. Each batch takes the
/// annuli of the next outer generation that miss every earlier selection and
/// keeps one parity of them.
pub fn divergence_report(
    tree: &DescendantTree,
    annuli: &[ComplementaryAnnulus],
    moduli: &[Option<ModulusValue>],
    batch_count: usize,
) -> DivergenceReport {
    let exact = moduli.iter().flatten().all(ModulusValue::is_exact);
    let mut violations = Vec::new();
    let links: Vec<Option<AncestorLink>> = (0..annuli.len())
        .map(|j| match ancestor_of(tree, annuli, j) {
            Ok(l) => Some(l),
            Err(NestError::ChainUnknown { .. } | NestError::IntermediateGenerationTooLow { .. }) => None,
            Err(e) => {
                violations.push(Violation { inequality: Inequality::UniqueAncestor, annulus: Some(j), detail: e.to_string() });
                None
            }
        })
        .collect();
    let known = |j: usize| moduli.get(j).and_then(Option::as_ref);
    for (j, l) in links.iter().enumerate() {
        if let (Some(l), Some(a), Some(b)) = (l, known(j), l.as_ref().and_then(|l| known(l.to))) {
            let rhs = b.scale(&l.factor());
            if !a.at_least(&rhs) {
                violations.push(Violation {
                    inequality: Inequality::Onestep,
                    annulus: Some(j),
                    detail: format!("mod(alpha_{j}) = {a} < {rhs} = 2^({}-{}) mod(alpha_{})", l.outer_generation_to, l.outer_generation_from, l.to),
                });
            }
        }
    }
    let max_gen = annuli.iter().map(|a| a.outer_generation).max();
    let complete_gen = tree.complete_generations.map_or(max_gen, |g| max_gen.map(|m| m.min(g)));
    // m₀: from here on every annulus has an ancestor
    let first_generation = complete_gen.and_then(|top| {
        (0..=top).find(|&m| annuli.iter().zip(&links).all(|(a, l)| a.outer_generation < m || a.outer_generation > top || l.is_some()))
    });
    let mut grand_ancestors = Vec::new();
    let mut min_modulus: Option<ModulusValue> = None;
    if let (Some(m0), Some(top)) = (first_generation, complete_gen) {
        for a in annuli.iter().filter(|a| (m0..=top).contains(&a.outer_generation)) {
            let Ok(g) = grand_ancestor(tree, annuli, a.index) else { continue };
            if let (Some(v), Some(gv)) = (known(a.index), known(g.annulus)) {
                let rhs = gv.scale(&g.factor);
                if !v.at_least(&rhs) {
                    violations.push(Violation {
                        inequality: Inequality::Manysteps,
                        annulus: Some(a.index),
                        detail: format!("mod(alpha_{}) = {v} < {rhs}", a.index),
                    });
                }
            }
            if !grand_ancestors.contains(&g.annulus) {
                grand_ancestors.push(g.annulus);
            }
        }
        grand_ancestors.sort_unstable();
        for &g in &grand_ancestors {
            if let Some(v) = known(g) {
                min_modulus = Some(match &min_modulus {
                    Some(m) => m.min(v).clone(),
                    None => v.clone(),
                });
            }
        }
    }
    let mut batches: Vec<Batch> = Vec::new();
    let mut running_total = ModulusValue::zero();
    if let (Some(m0), Some(top), Some(m_min)) = (first_generation, complete_gen, &min_modulus) {
        let bound = m_min.scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
        let mut taken: Vec<&ComplementaryAnnulus> = Vec::new();
        for m in m0..=top {
            if batches.len() >= batch_count {
                break;
            }
            let candidates: Vec<&ComplementaryAnnulus> =
                annuli.iter().filter(|a| a.outer_generation == m && known(a.index).is_some()).collect();
            let free: Vec<&ComplementaryAnnulus> =
                candidates.iter().copied().filter(|a| !taken.iter().any(|t| t.overlaps(a))).collect();
            let Ok((parity, selected)) = select_nonoverlapping(&free) else { continue };
            let sum = selected.iter().filter_map(|&j| known(j)).fold(ModulusValue::zero(), |s, v| s.add(v));
            let holds = sum.at_least(&bound);
            if !holds {
                violations.push(Violation {
                    inequality: Inequality::BatchBound,
                    annulus: None,
                    detail: format!("batch at outer generation {m}: sum {sum} < {bound}"),
                });
            }
            running_total = running_total.add(&sum);
            taken.extend(selected.iter().map(|&j| &annuli[j]));
            batches.push(Batch { outer_generation: m, candidates: candidates.len(), excluded: candidates.len() - free.len(), parity, selected, sum, holds });
        }
    }
    DivergenceReport {
        first_generation,
        grand_ancestors,
        min_modulus,
        batches,
        requested_batches: batch_count,
        running_total,
        links,
        violations,
        exact,
    }
}
