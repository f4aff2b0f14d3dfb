//! Exact test double: the descendant tree of the real Fibonacci map, with
//! planted rational moduli that obey the pullback inequalities.

use super::{complementary_annuli, divergence_report, ComplementaryAnnulus, DescendantTree, DivergenceReport, ModulusValue, NestError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Rule giving the child iterates of each critical annulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchingPlan {
    /// Children of `A_d(0)` for the real Fibonacci map; see [`fibonacci_children`].
    Fibonacci,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationPlan {
    /// The first annulus of this outer generation with an ancestor gets a
    /// modulus below the one-step bound.
    pub outer_generation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SyntheticSpec {
    pub branching: BranchingPlan,
    pub root_depth: usize,
    /// Generations built completely.
    pub generations: usize,
    /// `M₀` as a rational string such as `"1"` or `"3/2"`.
    pub min_modulus: String,
    /// Lower end of the per-step modulus loss, at least `1/2`.
    pub loss_floor: String,
    /// Probability that a node other than the root is planted degenerate.
    pub degenerate_fraction: f64,
    pub violation: Option<ViolationPlan>,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            branching: BranchingPlan::Fibonacci,
            root_depth: 1,
            generations: 7,
            min_modulus: "1".into(),
            loss_floor: "1/2".into(),
            degenerate_fraction: 0.5,
            violation: None,
        }
    }
}

impl SyntheticSpec {
    pub fn from_json(text: &str) -> Result<SyntheticSpec, NestError> {
        serde_json::from_str(text).map_err(|e| NestError::InvalidSpec(e.to_string()))
    }
}

fn fibonacci_upto(limit: usize) -> Vec<usize> {
    let mut f = vec![1usize, 2];
    while f[f.len() - 1] <= limit {
        let n = f.len();
        f.push(f[n - 1] + f[n - 2]);
    }
    f
}

/// Child iterates of `A_d(0)` for the real Fibonacci map in the 1/2-limb.
///
/// With `F = 1, 2, 3, 5, 8, …` and `T_k = F_{k+2} - 3`: `A_{T_k}(0)` has the
/// single child iterate `F_{k+2}`, and every `d` strictly between `T_k` and
/// `T_{k+1}` has the two iterates `F_{k+2}, F_{k+3}`.
pub fn fibonacci_children(d: usize) -> Vec<usize> {
    let f = fibonacci_upto(d + 8);
    let k = (0..).find(|&k| f[k + 2] - 3 >= d).expect("Fibonacci numbers are unbounded");
    if f[k + 2] - 3 == d {
        vec![f[k + 2]]
    } else {
        vec![f[k + 1], f[k + 2]]
    }
}

fn children(plan: BranchingPlan, d: usize) -> Vec<usize> {
    match plan {
        BranchingPlan::Fibonacci => fibonacci_children(d),
    }
}

/// All descendants of `root` with depth at most `limit`, as
/// `(depth, parent, iterate)` links, with their generations.
fn grow(plan: BranchingPlan, root: usize, limit: usize, max_generation: Option<usize>) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    let mut stack = vec![(root, 0usize)];
    while let Some((d, g)) = stack.pop() {
        if max_generation.is_some_and(|m| g >= m) {
            continue;
        }
        for n in children(plan, d) {
            if d + n <= limit {
                out.push((d + n, d, n, g + 1));
                stack.push((d + n, g + 1));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticNest {
    pub spec: SyntheticSpec,
    pub seed: u64,
    pub tree: DescendantTree,
    pub annuli: Vec<ComplementaryAnnulus>,
    /// Planted modulus of each complementary annulus.
    pub moduli: Vec<BigRational>,
    /// Planted modulus of each node; zero for degenerate ones.
    pub node_moduli: Vec<BigRational>,
    /// Ancestor each modulus was planted from.
    pub planted_ancestors: Vec<Option<usize>>,
}

impl SyntheticNest {
    pub fn moduli(&self) -> Vec<Option<ModulusValue>> {
        self.moduli.iter().map(|q| Some(ModulusValue::Exact(q.clone()))).collect()
    }

    pub fn report(&self, batch_count: usize) -> DivergenceReport {
        divergence_report(&self.tree, &self.annuli, &self.moduli(), batch_count)
    }
}

fn parse_rational(field: &str, s: &str) -> Result<BigRational, NestError> {
    s.trim().parse::<BigRational>().map_err(|_| NestError::InvalidSpec(format!("{field}: cannot parse {s:?} as a rational")))
}

/// Build the synthetic nest described by `spec`; `seed` drives the planted
/// moduli and degeneracies.
pub fn synthetic_nest(spec: &SyntheticSpec, seed: u64) -> Result<SyntheticNest, NestError> {
    let invalid = |s: String| Err(NestError::InvalidSpec(s));
    let m0 = parse_rational("min_modulus", &spec.min_modulus)?;
    let floor = parse_rational("loss_floor", &spec.loss_floor)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if m0 <= BigRational::zero() {
        return invalid("min_modulus must be positive".into());
    }
    if floor < half || floor >= BigRational::one() {
        return invalid("loss_floor must lie in [1/2, 1)".into());
    }
    if !(0.0..=1.0).contains(&spec.degenerate_fraction) {
        return invalid("degenerate_fraction must lie in [0, 1]".into());
    }
    if !(1..=12).contains(&spec.generations) {
        return invalid("generations must lie in 1..=12".into());
    }
    let plan = spec.branching;
    // depth reached by the complete generations
    let full = grow(plan, spec.root_depth, usize::MAX, Some(spec.generations));
    let deepest = full.iter().map(|l| l.0).max().unwrap_or(spec.root_depth);
    let mut limit = deepest;
    let links = loop {
        let links = grow(plan, spec.root_depth, limit, None);
        // the deepest complete-generation node needs two successors
        if links.iter().filter(|l| l.0 > deepest).count() >= 2 {
            break links;
        }
        limit += limit / 4 + 8;
    };
    let triples: Vec<(usize, usize, usize)> = links.iter().map(|l| (l.0, l.1, l.2)).collect();
    let mut tree = DescendantTree::from_links(spec.root_depth, &triples, limit, Some(spec.generations))?;
    if let Some(n) = tree.nodes.iter().find(|n| children(plan, n.depth).len() < 2) {
        return invalid(format!("node at depth {} has a single child", n.depth));
    }
    let annuli = complementary_annuli(&tree)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let at: HashMap<usize, usize> = tree.nodes.iter().map(|n| (n.depth, n.index)).collect();
    let mut moduli: Vec<BigRational> = Vec::with_capacity(annuli.len());
    let mut planted_ancestors = Vec::with_capacity(annuli.len());
    let mut violated = false;
    for a in &annuli {
        let (p, r, q) = (&tree.nodes[a.outer], &tree.nodes[a.middle], &tree.nodes[a.inner]);
        // push the triple forward along the inner annulus's own link
        let ancestor = q.parent.and_then(|qp| {
            let k = q.iterate;
            let pi = *at.get(&p.depth.checked_sub(k)?)?;
            let ri = *at.get(&r.depth.checked_sub(k)?)?;
            (tree.nodes[ri].generation >= 1 && ri == pi + 1 && qp == ri + 1).then_some((pi, p.generation - tree.nodes[pi].generation))
        });
        planted_ancestors.push(ancestor.map(|x| x.0));
        let value = match ancestor {
            Some((pi, steps)) => {
                let plant_violation = !violated && spec.violation.as_ref().is_some_and(|v| v.outer_generation == a.outer_generation);
                if plant_violation {
                    violated = true;
                    &moduli[pi] * super::pow2(-(steps as i64) - 1)
                } else {
                    (0..steps).fold(moduli[pi].clone(), |acc, _| {
                        let u = BigRational::new(BigInt::from(rng.gen_range(0..64u32)), BigInt::from(64));
                        acc * (&floor + (BigRational::one() - &floor) * u)
                    })
                }
            }
            None if moduli.is_empty() => m0.clone(),
            None => &m0 * (BigRational::one() + BigRational::new(BigInt::from(rng.gen_range(0..=64u32)), BigInt::from(64))),
        };
        moduli.push(value);
    }
    if spec.violation.is_some() && !violated {
        return invalid("no annulus of the requested outer generation has an ancestor".into());
    }
    let mut node_moduli = Vec::with_capacity(tree.len());
    for i in 0..tree.len() {
        let degenerate = i == 0 || i > annuli.len() || rng.gen_bool(spec.degenerate_fraction);
        tree.nodes[i].degenerate = Some(degenerate);
        // A_i is the middle annulus of α_{i-1}
        node_moduli.push(if degenerate { BigRational::zero() } else { &moduli[i - 1] * &half });
    }
    Ok(SyntheticNest { spec: spec.clone(), seed, tree, annuli, moduli, node_moduli, planted_ancestors })
}
