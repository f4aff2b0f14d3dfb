use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;
use yoccoz::cli::to_json_string;
use yoccoz::dynamics::{Parameter, Rotation};
use yoccoz::modulus::{estimate_modulus, ModulusConfig};
use yoccoz::nest::{ancestor_of, synthetic_nest, ModulusValue, SyntheticSpec};
use yoccoz::puzzle::AnnulusRegion;
use yoccoz::rays::{alpha_cycle, ray_point, Angle};
use yoccoz::tableau::Tableau;

const PARAMS: [Complex64; 3] = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-2.0, 0.0)];

fn coprime() -> impl Strategy<Value = (u64, u64)> {
    (2u64..=12).prop_flat_map(|q| (1..q, Just(q))).prop_filter("lowest terms", |(p, q)| p.gcd(q) == 1)
}

fn circle(centre: Complex64, r: f64, n: usize) -> Vec<Complex64> {
    (0..n).map(|k| centre + Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64)).collect()
}

fn wake(angles: &[Angle]) -> (Angle, Angle) {
    let n = angles.len();
    (0..n)
        .map(|i| (angles[i].clone(), angles[(i + 1) % n].clone()))
        .min_by(|a, b| a.0.ccw_to(&a.1).cmp(&b.0.ccw_to(&b.1)))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn green_doubles_under_f(which in 0usize..3, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let p = Parameter::new(PARAMS[which]);
        let z = Complex64::new(re, im);
        let g = p.green_value(z, 4096);
        prop_assume!(g > 1e-6);
        prop_assert!((p.green_value(p.evaluate(z), 4096) - 2.0 * g).abs() < 1e-9);
    }

    #[test]
    fn fixed_points_are_fixed(re in -2.0f64..0.25, im in -1.5f64..1.5) {
        let p = Parameter::new(Complex64::new(re, im));
        prop_assume!((Complex64::new(1.0, 0.0) - 4.0 * p.c).norm() > 1e-6);
        let f = p.fixed_points().unwrap();
        prop_assert!((p.evaluate(f.alpha) - f.alpha).norm() < 1e-12);
        prop_assert!((p.evaluate(f.beta) - f.beta).norm() < 1e-12);
    }

    #[test]
    fn critical_orbit_is_an_orbit(re in -2.0f64..0.5, im in -1.2f64..1.2, n in 1usize..64) {
        let p = Parameter::new(Complex64::new(re, im));
        let o = p.critical_orbit(n);
        prop_assert_eq!(o.points.len(), n);
        for w in o.points.windows(2).filter(|w| w[1].is_finite()) {
            prop_assert_eq!(w[1], p.evaluate(w[0]));
        }
    }

    #[test]
    fn angles_are_reduced(p in 0i64..1000, q in 1i64..1000) {
        let a = Angle::new(p, q).unwrap();
        prop_assert_eq!(a.numer().gcd(a.denom()), num_bigint::BigInt::from(1));
        prop_assert_eq!(a.to_string().parse::<Angle>().unwrap(), a);
    }

    #[test]
    fn alpha_cycle_is_one_doubling_cycle((p, q) in coprime()) {
        let cycle = alpha_cycle(Rotation::new(p, q).unwrap()).unwrap();
        prop_assert_eq!(cycle.angles.len(), q as usize);
        let mut a = cycle.angles[0].clone();
        for k in 1..=q {
            a = a.double();
            prop_assert!(cycle.contains(&a));
            prop_assert_eq!(a == cycle.angles[0], k == q);
        }
        // doubling turns the circular order by p
        let n = cycle.angles.len();
        for (i, x) in cycle.angles.iter().enumerate() {
            prop_assert_eq!(&x.double(), &cycle.angles[(i + p as usize) % n]);
        }
    }

    #[test]
    fn formatted_floats_round_trip(x in any::<f64>()) {
        prop_assume!(x.is_finite());
        let s = to_json_string(&x);
        prop_assert_eq!(s.trim().parse::<f64>().unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rays_are_forward_invariant(which in 0usize..2, num in 0i64..63, t in 0.05f64..1.0) {
        let p = Parameter::new(PARAMS[which]);
        let a = Angle::new(num, 63).unwrap();
        let z = ray_point(&p, &a, t, 16).unwrap();
        let w = ray_point(&p, &a.double(), 2.0 * t, 16).unwrap();
        prop_assert!((p.evaluate(z) - w).norm() < 1e-6);
    }

    #[test]
    fn kneading_columns_obey_the_column_rule(num in 1i64..4096, limb in prop::sample::select(vec![(1u64, 2u64), (1, 3), (2, 5)])) {
        let cycle = alpha_cycle(Rotation::new(limb.0, limb.1).unwrap()).unwrap();
        // critical value angles of the limb fill the shortest gap of the cycle
        let (lo, hi) = wake(&cycle.angles);
        let u = num_rational::BigRational::new(num.into(), 4097.into());
        let theta = Angle::from_ratio(lo.as_ratio() + lo.ccw_to(&hi) * u);
        let t = Tableau::kneading(&theta, &cycle, 24, 24);
        prop_assert!(t.column_rule_violations().is_empty());
        prop_assert!(t.north_east_violations().is_empty());
        for d in 0..=t.depth {
            prop_assert_eq!(t.mark(d, 0).map(|m| m.symbol()), Some('C'));
        }
        for d in 0..12 {
            for l in t.children_of(d).unwrap().links {
                prop_assert_eq!(l.degree, 2);
            }
        }
    }

    #[test]
    fn synthetic_accounting_holds(seed in any::<u64>(), generations in 4usize..=7, floor in prop::sample::select(vec!["1/2", "3/4", "7/8"]), p in 0.0f64..=1.0) {
        let spec = SyntheticSpec { generations, loss_floor: floor.into(), degenerate_fraction: p, ..Default::default() };
        let n = synthetic_nest(&spec, seed).unwrap();
        let r = n.report(generations - 2);
        prop_assert!(r.holds(), "{:?}", r.violations);
        prop_assert!(r.complete());
        let m0 = r.min_modulus.clone().unwrap();
        let half = match &m0 { ModulusValue::Exact(q) => ModulusValue::Exact(q / num_rational::BigRational::from_integer(2.into())), _ => unreachable!() };
        let mut taken: Vec<usize> = Vec::new();
        for b in &r.batches {
            prop_assert!(b.sum.at_least(&half));
            prop_assert!(b.selected.iter().all(|&j| taken.iter().all(|&t| t.abs_diff(j) >= 2)));
            taken.extend(&b.selected);
        }
        prop_assert!(r.running_total.at_least(&r.total_bound().unwrap()));
        for a in &n.annuli {
            let link = ancestor_of(&n.tree, &n.annuli, a.index).ok().map(|l| l.to);
            prop_assert_eq!(link, n.planted_ancestors[a.index]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn modulus_is_similarity_invariant(ratio in 1.6f64..4.0, scale in 0.3f64..3.0, re in -2.0f64..2.0, im in -2.0f64..2.0, shift in 0.0f64..0.3) {
        // off-centre inner disk
        let inner_c = Complex64::new(shift * (ratio - 1.0), 0.0);
        let region = AnnulusRegion::new(circle(Complex64::new(0.0, 0.0), ratio, 512), circle(inner_c, 1.0, 256));
        let map = |zs: &[Complex64]| zs.iter().map(|&z| z * scale + Complex64::new(re, im)).collect::<Vec<_>>();
        let image = AnnulusRegion::new(map(&region.outer), map(&region.inner));
        let cfg = ModulusConfig { resolution: 256, ..ModulusConfig::default() };
        let a = estimate_modulus(&region, &cfg).unwrap().value;
        let b = estimate_modulus(&image, &cfg).unwrap().value;
        prop_assert!((a - b).abs() / a < 0.01, "{a} vs {b}");
        let swapped = estimate_modulus(&region, &ModulusConfig { swap_roles: true, ..cfg }).unwrap().value;
        prop_assert!((a - swapped).abs() / a < 1e-3);
    }
}
