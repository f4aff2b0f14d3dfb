//! Conformal modulus of round, eccentric and square annuli, and the
//! superadditivity defect of a split.
//!
//!     cargo run --release --example modulus

use num_complex::Complex64;
use std::f64::consts::TAU;
use yoccoz::modulus::{estimate_modulus, groetzsch_defect, ModulusConfig};
use yoccoz::puzzle::AnnulusRegion;

fn circle(centre: Complex64, r: f64, n: usize) -> Vec<Complex64> {
    (0..n).map(|k| centre + Complex64::from_polar(r, TAU * k as f64 / n as f64)).collect()
}

pub fn main() {
    let zero = Complex64::new(0.0, 0.0);
    let cfg = ModulusConfig { history: true, ..ModulusConfig::default() };
    let round = AnnulusRegion::new(circle(zero, 3.0, 1024), circle(zero, 1.0, 512));
    let e = estimate_modulus(&round, &cfg).unwrap();
    println!("1 < |z| < 3: {:.6} (exact {:.6}), history {:?}", e.value, 3f64.ln() / TAU, e.refinement_history);

    let eccentric = AnnulusRegion::new(circle(zero, 3.0, 1024), circle(Complex64::new(1.2, 0.0), 1.0, 512));
    println!("eccentric: {:.6}", estimate_modulus(&eccentric, &cfg).unwrap().value);

    let square = |h: f64| vec![Complex64::new(-h, -h), Complex64::new(h, -h), Complex64::new(h, h), Complex64::new(-h, h)];
    println!("nested squares: {:.6}", estimate_modulus(&AnnulusRegion::new(square(2.0), square(1.0)), &cfg).unwrap().value);

    let touching = AnnulusRegion::new(circle(zero, 2.0, 512), circle(Complex64::new(1.0, 0.0), 1.0, 256));
    let t = estimate_modulus(&touching, &cfg).unwrap();
    println!("touching circles: degenerate {}, pinch points {:?}", t.degenerate, t.pinch_points);

    let split = circle(Complex64::new(0.2, 0.1), 1.8, 512);
    let parts = [AnnulusRegion::new(round.outer.clone(), split.clone()), AnnulusRegion::new(split, round.inner.clone())];
    let g = groetzsch_defect(&round, &parts, &ModulusConfig::default()).unwrap();
    println!("split: whole {:.6}, parts {:?}, defect {:.2e} (tolerance {:.1e})", g.whole, g.parts, g.defect, g.tolerance);
}
