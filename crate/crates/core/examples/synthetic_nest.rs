//! Exact divergence accounting on a synthetic nest with rational moduli,
//! then the same nest with a planted violation of the one-step bound.
//!
//!     cargo run --example synthetic_nest

use yoccoz::nest::{synthetic_nest, SyntheticSpec, ViolationPlan};

pub fn main() {
    let spec = SyntheticSpec::default();
    let nest = synthetic_nest(&spec, 7).expect("valid spec");
    println!("{} nodes, {} complementary annuli", nest.tree.len(), nest.annuli.len());
    for g in 0..=spec.generations {
        println!("  generation {g}: {} nodes", nest.tree.generation_count(g));
    }
    let r = nest.report(5);
    println!("M0 = {}, first generation m0 = {:?}", r.min_modulus.as_ref().unwrap(), r.first_generation);
    for b in &r.batches {
        println!(
            "  batch at generation {}: {} candidates, {} excluded, {} parity keeps {}, sum {}",
            b.outer_generation,
            b.candidates,
            b.excluded,
            b.parity,
            b.selected.len(),
            b.sum
        );
    }
    println!("running total {} >= {}", r.running_total, r.total_bound().unwrap());

    let bad = SyntheticSpec { violation: Some(ViolationPlan { outer_generation: 4 }), ..spec };
    let r = synthetic_nest(&bad, 7).unwrap().report(5);
    for v in &r.violations {
        println!("violation of {}: {}", v.inequality.name(), v.detail);
    }
}
