//! Dual nest of the real Fibonacci map from its puzzle, with moduli from
//! the grid solver. The window is shallow, so the report is partial.
//!
//!     cargo run --release --example geometric_nest

use num_complex::Complex64;
use yoccoz::dynamics::{Parameter, Rotation};
use yoccoz::modulus::ModulusConfig;
use yoccoz::nest::geometric_nest;
use yoccoz::puzzle::{Puzzle, PuzzleConfig};
use yoccoz::rays::alpha_cycle;
use yoccoz::tableau::Tableau;

pub fn main() {
    let limb = Rotation::new(1, 2).unwrap();
    let param = Parameter::with_limb(Complex64::new(-1.8705286321646448, 0.0), limb);
    let p = Puzzle::build(param, alpha_cycle(limb).unwrap(), 10, PuzzleConfig::default()).expect("puzzle builds");
    let t = Tableau::build(&p, 10, 40).expect("tableau");
    let cfg = ModulusConfig { resolution: 256, history: true, ..ModulusConfig::default() };
    let nest = geometric_nest(&p, &t, None, &cfg).expect("nest");
    for n in &nest.tree.nodes {
        println!("A_{}(0): generation {}, reached by f^{}", n.depth, n.generation, n.iterate);
    }
    for (a, e) in nest.annuli.iter().zip(&nest.estimates) {
        let (o, i) = (nest.tree.nodes[a.outer].depth, nest.tree.nodes[a.inner].depth);
        match e {
            Ok(e) => println!("alpha_{}: P_{}(0) minus P_{}(0), modulus {:.5} +- {:.1e}", a.index, o + 1, i, e.value, e.uncertainty),
            Err(err) => println!("alpha_{}: {err}", a.index),
        }
    }
    let r = nest.report(3);
    println!("achieved depth {}, {} of {} batches", nest.achieved_depth, r.batches.len(), r.requested_batches);
}
