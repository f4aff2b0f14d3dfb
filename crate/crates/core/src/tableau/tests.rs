use super::*;
use crate::dynamics::{Parameter, Rotation};
use crate::puzzle::PuzzleConfig;
use crate::rays::alpha_cycle;
use num_complex::Complex64;

fn cycle(p: u64, q: u64) -> AngleCycle {
    alpha_cycle(Rotation::new(p, q).unwrap()).unwrap()
}

fn a(s: &str) -> Angle {
    s.parse().unwrap()
}

fn column(t: &Tableau, k: usize) -> String {
    (0..=t.depth).map(|d| t.mark(d, k).map_or('U', Mark::symbol)).collect()
}

#[test]
fn c_i_kneading_columns() {
    let t = Tableau::kneading(&a("1/6"), &cycle(1, 3), 3, 8);
    assert_eq!(column(&t, 0), "CCCC");
    assert_eq!(column(&t, 1), "SOOO");
    assert_eq!(column(&t, 2), "SOOO");
    assert_eq!(column(&t, 3), "CSOO");
    assert_eq!(column(&t, 4), "SOOO");
    assert_eq!(column(&t, 5), "CSOO");
    assert!(t.column_rule_violations().is_empty());
    assert!(t.north_east_violations().is_empty());
}

#[test]
fn c_i_geometric_matches_kneading() {
    let p = Puzzle::build(Parameter::new(Complex64::new(0.0, 1.0)), cycle(1, 3), 5, PuzzleConfig::default()).unwrap();
    let geo = Tableau::build(&p, 5, 12).unwrap();
    let exact = Tableau::kneading(&a("1/6"), &cycle(1, 3), 5, 12);
    assert_eq!(geo.unresolvable_fraction(), 0.0);
    for d in 0..=5 {
        for k in 0..12 {
            assert_eq!(geo.mark(d, k), exact.mark(d, k), "({d},{k})");
        }
    }
    assert_eq!(classify(&p, 1, 3).unwrap(), Mark::SemiCritical);
    assert_eq!(classify(&p, 4, 0).unwrap(), Mark::Critical);
    let r = geo.is_recurrent();
    assert!(!r.recurrent_so_far);
    assert_eq!(r.window_depth, 5);
    assert!(!geo.is_periodic().periodic_so_far);
}

#[test]
fn fibonacci_signs_match_orbit() {
    // signs of f^k(c), k = 1..33, for c = -1.8705286321646448 at 60 digits
    let oracle = "-++---+--++-+-++---++-++---+--++-";
    let s: String = fibonacci_signs(33).iter().map(|&n| if n { '-' } else { '+' }).collect();
    assert_eq!(s, oracle);
}

#[test]
fn angle_of_chebyshev_parameter() {
    // c = -2: orbit -2, 2, 2, ... has angle 1/2
    let mut signs = vec![true];
    signs.extend(std::iter::repeat_n(false, 19));
    let t = angle_from_signs(&signs);
    assert!((t.to_f64() - 0.5).abs() < 1e-5);
}

#[test]
fn fibonacci_tableau_is_recurrent_not_periodic() {
    let t = Tableau::kneading(&fibonacci_angle(512), &cycle(1, 2), 40, 30);
    assert_eq!(t.unresolvable_fraction(), 0.0);
    assert!(t.column_rule_violations().is_empty());
    assert!(t.north_east_violations().is_empty());
    let r = t.is_recurrent();
    assert!(r.recurrent_so_far, "{:?}", r.witnesses);
    // closest returns at Fibonacci times
    let cols: Vec<usize> = r.witnesses.iter().map(|w| w.0).collect();
    for w in &cols {
        assert!([2, 3, 5, 8, 13, 21].contains(w), "{cols:?}");
    }
    assert!(!t.is_periodic().periodic_so_far);
}

#[test]
fn fibonacci_children_are_excellent() {
    let t = Tableau::kneading(&fibonacci_angle(512), &cycle(1, 2), 60, 300);
    let first = t.first_excellent_child().expect("an excellent child");
    let kids = t.children_of(first.child_depth).unwrap();
    assert!(kids.links.len() >= 2);
    for k in &kids.links {
        match t.is_excellent(k) {
            Ok(v) => assert!(v),
            Err(TableauError::WindowTooShallow { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn periodic_angle_gives_critical_column() {
    // airplane: period-3 critical orbit
    let t = Tableau::kneading(&a("3/7"), &cycle(1, 2), 12, 10);
    let p = t.is_periodic();
    assert!(p.periodic_so_far);
    assert_eq!(p.column, Some(3));
    assert!(t.is_recurrent().recurrent_so_far);
}

#[test]
fn injected_critical_column_is_periodic() {
    let t = Tableau::from_rows(&["CSC", "COC", "COC"]).unwrap();
    assert_eq!(t.is_periodic().column, Some(2));
    assert!(t.is_recurrent().recurrent_so_far);
}

#[test]
fn column_rule_violation_detected() {
    let t = Tableau::from_rows(&["CS", "CC", "CO"]).unwrap();
    assert_eq!(t.column_rule_violations(), vec![1]);
    let t = Tableau::from_rows(&["CS", "CS"]).unwrap();
    assert_eq!(t.column_rule_violations(), vec![1]);
}

#[test]
fn planted_children_found() {
    // children of A_0 at iterates 2 and 4
    let t = Tableau::from_rows(&[
        "CSCSCS", //
        "COCOCO", //
        "CSOSOO", //
        "COOOOO", //
        "COOOOO", //
        "COOOOO", //
    ])
    .unwrap();
    let s = t.children_of(0).unwrap();
    let iterates: Vec<usize> = s.links.iter().map(|l| l.iterate).collect();
    assert_eq!(iterates, vec![2, 4]);
    assert!(s.links.iter().all(|l| l.degree == 2));
    assert_eq!(s.searched_to, 4);
}

#[test]
fn shallow_window_is_undecided() {
    let t = Tableau::from_rows(&["CS", "CO"]).unwrap();
    assert!(matches!(t.children_of(0), Err(TableauError::WindowTooShallow { .. })));
    let link = ChildLink { child_depth: 1, parent_depth: 0, iterate: 1, degree: 2 };
    assert!(matches!(t.is_excellent(&link), Err(TableauError::WindowTooShallow { .. })));
}

#[test]
fn csv_layout() {
    let t = Tableau::from_rows(&["CS", "CU"]).unwrap();
    assert_eq!(t.to_csv(), "depth,0,1\n0,C,S\n1,C,U\n");
}
