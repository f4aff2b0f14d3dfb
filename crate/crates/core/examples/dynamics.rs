//! Fixed points, critical orbit and escape-rate potential of `z^2 + c`.
//!
//!     cargo run --example dynamics

use num_complex::Complex64;
use yoccoz::dynamics::Parameter;

pub fn main() {
    for c in [Complex64::new(0.0, 1.0), Complex64::new(-1.8705286321646448, 0.0), Complex64::new(-0.12, 0.75)] {
        let p = Parameter::new(c);
        let f = p.fixed_points().expect("c is not 1/4");
        println!("c = {c}");
        println!("  alpha = {:.12}  |f'(alpha)| = {:.6}", f.alpha, (2.0 * f.alpha).norm());
        println!("  beta  = {:.12}  |f'(beta)|  = {:.6}", f.beta, (2.0 * f.beta).norm());
        let orbit = p.critical_orbit(6);
        let pts: Vec<String> = orbit.points.iter().map(|z| format!("{z:.4}")).collect();
        println!("  critical orbit: {}", pts.join(", "));
        for z in [Complex64::new(2.0, 0.0), Complex64::new(0.0, 3.0)] {
            println!("  G({z}) = {:.12}", p.green_value(z, 4096));
        }
    }
}
