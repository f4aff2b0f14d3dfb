//! Puzzle pieces for `c = i` in the 1/3-limb: counts, nesting, forward
//! covariance and the distance between nested critical pieces.
//!
//!     cargo run --release --example puzzle

use num_complex::Complex64;
use yoccoz::dynamics::{Parameter, Rotation};
use yoccoz::puzzle::{Puzzle, PuzzleConfig};
use yoccoz::rays::alpha_cycle;

pub fn main() {
    let limb = Rotation::new(1, 3).unwrap();
    let param = Parameter::with_limb(Complex64::new(0.0, 1.0), limb);
    let p = Puzzle::build(param, alpha_cycle(limb).unwrap(), 5, PuzzleConfig::default()).expect("puzzle builds");
    for d in 0..=p.depth() {
        let crit = p.critical_piece(d).unwrap();
        println!("depth {d}: level {:.5}, {} pieces, critical piece {} with diameter {:.4}", p.level(d), p.levels[d].len(), crit.id, crit.diameter());
    }
    let m = p.markov_check();
    println!("nesting: {} pairs, {} nested, {} disjoint, {} violations", m.pairs_checked, m.nested_pairs, m.disjoint_pairs, m.violations.len());
    let cov = p.forward_covariance(3, 20, 1);
    println!("forward covariance: {} samples, {} escapes", cov.samples_checked, cov.escapes.len());
    for d in 0..=p.depth() - 2 {
        println!("separation of P_{d}(0) and P_{}(0): {:.4}", d + 2, p.separation(d).unwrap());
    }
}
