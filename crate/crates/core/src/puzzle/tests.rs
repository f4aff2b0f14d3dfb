use super::*;
use crate::dynamics::Rotation;
use crate::rays::alpha_cycle;
use std::sync::OnceLock;

fn c_i() -> Parameter {
    Parameter::new(Complex64::new(0.0, 1.0))
}

fn cycle(p: u64, q: u64) -> AngleCycle {
    alpha_cycle(Rotation::new(p, q).unwrap()).unwrap()
}

fn shared() -> &'static Puzzle {
    static P: OnceLock<Puzzle> = OnceLock::new();
    P.get_or_init(|| Puzzle::build(c_i(), cycle(1, 3), 3, PuzzleConfig::default()).unwrap())
}

#[test]
fn depth_zero_has_q_sectors() {
    let p = shared();
    assert_eq!(p.levels[0].len(), 3);
    assert_eq!(p.levels[0].iter().filter(|x| x.contains_critical).count(), 1);
    let crit = p.piece_containing(0, Complex64::new(0.0, 0.0)).unwrap();
    assert!(crit.contains_critical);
}

#[test]
fn piece_counts_follow_pullback() {
    let p = shared();
    let counts: Vec<usize> = p.levels.iter().map(Vec::len).collect();
    assert_eq!(counts, vec![3, 5, 9, 17]);
}

#[test]
fn bounding_angles_are_preimages() {
    let p = shared();
    for d in 0..3 {
        let mut pre: Vec<Angle> = p
            .bounding_angles(d)
            .iter()
            .flat_map(|a| {
                let (x, y) = a.preimages();
                [x, y]
            })
            .collect();
        pre.sort();
        pre.dedup();
        assert_eq!(pre, p.bounding_angles(d + 1));
    }
}

#[test]
fn equipotential_arcs_sit_on_their_level() {
    let p = shared();
    for lvl in &p.levels {
        for piece in lvl {
            let t = p.level(piece.depth);
            let hits = piece
                .boundary()
                .iter()
                .filter(|z| (p.param.green_value(**z, 4096) - t).abs() < 1e-6)
                .count();
            assert!(hits >= 3 * piece.arcs.len());
        }
    }
}

#[test]
fn outside_and_on_boundary() {
    let p = shared();
    assert!(matches!(p.piece_containing(0, Complex64::new(10.0, 0.0)), Err(LocateError::OutsidePuzzle { .. })));
    let ray = p.ray_samples(&"1/7".parse().unwrap()).unwrap();
    assert!(matches!(p.piece_containing(0, ray[40]), Err(LocateError::OnBoundary { .. })));
}

#[test]
fn critical_value_is_located() {
    let p = shared();
    for d in 0..=3 {
        let cv = p.critical_value_piece(d).unwrap();
        assert!(cv.encloses(p.param.c));
        // c = i is the landing point of the ray 1/6
        assert!(cv.arcs.contains_interior(&"1/6".parse().unwrap()));
    }
}

#[test]
fn symbolic_critical_value_agrees_with_geometry() {
    let cfg = PuzzleConfig { critical_value_angle: Some("1/6".parse().unwrap()), ..Default::default() };
    let q = Puzzle::build(c_i(), cycle(1, 3), 3, cfg).unwrap();
    let p = shared();
    for d in 0..=3 {
        assert_eq!(q.critical_value_piece(d).unwrap().arcs, p.critical_value_piece(d).unwrap().arcs);
    }
}

#[test]
fn nested_critical_pieces_share_alpha_rays() {
    let p = shared();
    let region = p.annulus_between((0, p.critical_piece(0).unwrap().id), (1, p.critical_piece(1).unwrap().id)).unwrap();
    assert!(region.is_degenerate());
    let err = p.annulus_between((1, p.critical_piece(1).unwrap().id), (0, p.critical_piece(0).unwrap().id));
    assert!(matches!(err, Err(PuzzleError::NotNested { .. })));
}

#[test]
fn markov_holds_and_catches_injection() {
    let p = shared();
    let r = p.markov_check();
    assert!(r.violations.is_empty(), "{:?}", r.violations);
    let mut bad = p.clone();
    let victim = bad.critical_piece(1).unwrap().id;
    let shifted: Vec<Complex64> = bad.levels[1][victim].boundary().iter().map(|z| z + Complex64::new(3.0, 0.0)).collect();
    bad.levels[1][victim].set_boundary(shifted);
    assert!(!bad.markov_check().violations.is_empty());
}

#[test]
fn sanity_mode_c_zero_gives_round_sectors() {
    let cfg = PuzzleConfig { r0: 2f64.ln(), ..Default::default() };
    let p = Puzzle::build(Parameter::new(Complex64::new(0.0, 0.0)), cycle(1, 3), 2, cfg).unwrap();
    assert_eq!(p.levels.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 5, 9]);
    for lvl in &p.levels {
        for piece in lvl {
            let radius = f64::powf(2.0, f64::powi(2.0, -(piece.depth as i32)));
            let max = piece.boundary().iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!((max - radius).abs() < 1e-12);
            // boundary points are on the circle of that radius or on radii through 0
            for z in piece.boundary() {
                let on_circle = (z.norm() - radius).abs() < 1e-12;
                let on_radius = piece
                    .arcs
                    .endpoints()
                    .any(|a| (z.arg() - 2.0 * std::f64::consts::PI * a.to_f64()).sin().abs() * z.norm() < 1e-12);
                assert!(on_circle || on_radius, "{z}");
            }
        }
    }
    assert_eq!(p.separation(0).unwrap(), 0.0);
}

#[test]
fn one_half_limb_has_two_sectors() {
    let p = Puzzle::build(Parameter::new(Complex64::new(-1.0, 0.0)), cycle(1, 2), 1, PuzzleConfig::default()).unwrap();
    assert_eq!(p.levels[0].len(), 2);
    assert_eq!(p.levels[1].len(), 3);
}

#[test]
fn wrong_limb_is_inconsistent() {
    let r = Puzzle::build_depth_zero(c_i(), cycle(1, 2), PuzzleConfig::default());
    assert!(matches!(r, Err(PuzzleError::InconsistentLanding(_))));
}

#[test]
fn forward_covariance_small() {
    let p = shared();
    let rep = p.forward_covariance(3, 10, 7);
    assert!(rep.escapes.is_empty(), "{:?}", rep.escapes);
    assert_eq!(rep.self_misses, 0);
    assert!(rep.degree_mismatches.is_empty(), "{:?}", rep.degree_mismatches);
}

#[test]
fn runs_are_cyclic() {
    assert_eq!(runs(&[true, false, true, true]), vec![(2, 3)]);
    assert_eq!(runs(&[false, true, false, true]), vec![(1, 1), (3, 1)]);
    assert_eq!(runs(&[true, true]), vec![(0, 2)]);
}
