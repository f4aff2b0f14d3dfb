//! Geometric checks on the real Fibonacci parameter in the 1/2-limb.

mod common;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use yoccoz::dynamics::{Parameter, Rotation};
use yoccoz::modulus::ModulusConfig;
use yoccoz::nest::{geometric_nest, GeometricNest};
use yoccoz::puzzle::{Puzzle, PuzzleConfig};
use yoccoz::rays::alpha_cycle;
use yoccoz::tableau::{Mark, Tableau};

const FIBONACCI_C: f64 = -1.8705286321646448;

fn puzzle() -> &'static Puzzle {
    static P: OnceLock<Puzzle> = OnceLock::new();
    P.get_or_init(|| {
        let limb = Rotation::new(1, 2).unwrap();
        let param = Parameter::with_limb(Complex64::new(FIBONACCI_C, 0.0), limb);
        Puzzle::build(param, alpha_cycle(limb).unwrap(), 10, PuzzleConfig::default()).unwrap()
    })
}

fn tableau() -> &'static Tableau {
    static T: OnceLock<Tableau> = OnceLock::new();
    T.get_or_init(|| Tableau::build(puzzle(), 10, 40).unwrap())
}

/// All solutions of `f^n(z) = w`.
fn preimages(param: &Parameter, w: Complex64, n: usize) -> Vec<Complex64> {
    let mut zs = vec![w];
    for _ in 0..n {
        zs = zs
            .iter()
            .flat_map(|&u| {
                let s = (u - param.c).sqrt();
                [s, -s]
            })
            .collect();
    }
    zs
}

#[test]
fn tableau_is_clean_and_obeys_the_column_rule() {
    let t = tableau();
    assert!(t.column_rule_violations().is_empty());
    assert!(t.unresolvable_fraction() < 0.05);
    let k = Tableau::kneading(&yoccoz::tableau::fibonacci_angle(256), &alpha_cycle(Rotation::new(1, 2).unwrap()).unwrap(), 10, 40);
    assert_eq!(t.rows(), k.rows());
}

#[test]
fn annulus_links_have_the_predicted_degree() {
    let p = puzzle();
    let t = tableau();
    // A_4(0) -> A_1(0) by f^3, then A_9(0) -> A_4(0) by f^5
    let link = t.children_of(1).unwrap().links;
    assert_eq!(link.iter().map(|l| (l.child_depth, l.iterate)).collect::<Vec<_>>(), vec![(4, 3), (6, 5)]);
    let in_annulus = |d: usize, z: Complex64| {
        let (outer, inner) = (p.critical_piece(d).unwrap(), p.critical_piece(d + 1).unwrap());
        outer.encloses(z) && !inner.encloses(z)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (p1, p2) = (p.critical_piece(1).unwrap(), p.critical_piece(2).unwrap());
    let mut checked = 0;
    for _ in 0..200 {
        let w = p.interior_sample(p1.reference(), &mut rng);
        if p2.encloses(w) || p1.boundary_distance(w) < 1e-2 || p2.boundary_distance(w) < 1e-2 {
            continue;
        }
        let count = |d: usize, n: usize| preimages(&p.param, w, n).into_iter().filter(|&z| in_annulus(d, z)).count();
        assert_eq!(count(4, 3), 2, "w = {w}");
        assert_eq!(count(6, 5), 2, "w = {w}");
        assert_eq!(count(9, 8), 4, "w = {w}");
        checked += 1;
        if checked == 10 {
            break;
        }
    }
    assert_eq!(checked, 10);
}

#[test]
fn covering_ratios_match_the_marks() {
    let cfg = ModulusConfig { resolution: 512, history: true, ..ModulusConfig::default() };
    let all = common::orbit_coverings(puzzle(), tableau(), 4, 7, 0.05, &cfg).unwrap();
    for (j, d, v) in &all {
        assert!(v.holds, "z_{j} at depth {d}: {v:?}");
    }
    let measured = |m: Mark| all.iter().filter(|(_, _, v)| v.mark == m && v.ratio.is_some()).count();
    assert!(measured(Mark::Critical) >= 1);
    assert!(measured(Mark::OffCritical) >= 1);
}

fn nest() -> &'static GeometricNest {
    static N: OnceLock<GeometricNest> = OnceLock::new();
    N.get_or_init(|| {
        let cfg = ModulusConfig { resolution: 256, history: true, ..ModulusConfig::default() };
        geometric_nest(puzzle(), tableau(), None, &cfg).unwrap()
    })
}

#[test]
fn shallow_nest_gives_a_partial_report() {
    let n = nest();
    assert_eq!(n.tree.root_depth, 1);
    let depths: Vec<(usize, usize)> = n.tree.nodes.iter().map(|m| (m.depth, m.generation)).collect();
    assert_eq!(&depths[..3], &[(1, 0), (4, 1), (6, 1)]);
    assert!(n.achieved_depth <= 10);
    assert!(n.regions.iter().all(|r| r.pinch_points.is_empty()));
    for e in &n.estimates {
        let e = e.as_ref().unwrap();
        assert!(!e.degenerate && e.value > 0.0);
    }
    let r = n.report(3);
    assert!(r.holds());
    assert!(!r.complete());
    assert!(!r.exact);
}

#[test]
fn critical_pieces_shrink() {
    let d = puzzle().critical_diameters();
    assert!(d.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9)));
    assert!(d[10] < d[0]);
}
