//! External rays of the 1/3-limb cycle for `c = i` landing on the alpha
//! fixed point.
//!
//!     cargo run --example rays

use num_complex::Complex64;
use yoccoz::dynamics::{Parameter, Rotation};
use yoccoz::rays::{alpha_cycle, trace_equipotential, trace_landed};

pub fn main() {
    let limb = Rotation::new(1, 3).unwrap();
    let param = Parameter::with_limb(Complex64::new(0.0, 1.0), limb);
    let alpha = param.fixed_points().unwrap().alpha;
    println!("alpha = {alpha:.12}");
    for angle in alpha_cycle(limb).unwrap().angles {
        let ray = trace_landed(&param, &angle, 1.0, 8).expect("ray lands");
        let landing = ray.landing.unwrap();
        println!(
            "ray {angle}: {} samples, lands at {:.10} ({:?}), distance to alpha {:.1e}",
            ray.samples.len(),
            landing.point,
            landing.matched,
            (landing.point - alpha).norm()
        );
    }
    let e = trace_equipotential(&param, 0.5, 256).unwrap();
    let worst = e.samples.iter().map(|&z| (param.green_value(z, 4096) - 0.5).abs()).fold(0.0, f64::max);
    println!("equipotential G = 0.5: {} samples, max level error {worst:.1e}", e.samples.len());
}
