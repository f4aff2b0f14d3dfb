//! Critical tableau of the real Fibonacci map, read off the puzzle and from
//! the kneading sequence, with its children and recurrence verdicts.
//!
//!     cargo run --release --example tableau

use num_complex::Complex64;
use yoccoz::dynamics::{Parameter, Rotation};
use yoccoz::puzzle::{Puzzle, PuzzleConfig};
use yoccoz::rays::alpha_cycle;
use yoccoz::tableau::{fibonacci_angle, Tableau};

pub fn main() {
    let limb = Rotation::new(1, 2).unwrap();
    let cycle = alpha_cycle(limb).unwrap();
    let param = Parameter::with_limb(Complex64::new(-1.8705286321646448, 0.0), limb);
    let p = Puzzle::build(param, cycle.clone(), 8, PuzzleConfig::default()).expect("puzzle builds");
    let geometric = Tableau::build(&p, 8, 24).expect("tableau");
    print!("{}", geometric.to_csv());
    let kneading = Tableau::kneading(&fibonacci_angle(256), &cycle, 8, 24);
    println!("geometric rows equal kneading rows: {}", geometric.rows() == kneading.rows());

    let deep = Tableau::kneading(&fibonacci_angle(512), &cycle, 60, 40);
    for d in [1, 4, 6, 9] {
        let s = deep.children_of(d).unwrap();
        let kids: Vec<String> = s.links.iter().map(|l| format!("depth {} by f^{}", l.child_depth, l.iterate)).collect();
        println!("children of A_{d}(0): {}", kids.join(", "));
    }
    let r = deep.is_recurrent();
    let q = deep.is_periodic();
    println!("window {}x{}: recurrent {}, periodic {}", r.window_depth, r.window_width, r.recurrent_so_far, q.periodic_so_far);
    println!("record columns: {:?}", r.witnesses);
}
