use super::*;
use crate::geometry::circle;
use std::f64::consts::{E, PI};

fn round(r: f64, big: f64) -> AnnulusRegion {
    let o = Complex64::new(0.0, 0.0);
    AnnulusRegion::new(circle(o, big, 2048), circle(o, r, 2048))
}

fn cfg(n: usize) -> ModulusConfig {
    ModulusConfig { resolution: n, ..Default::default() }
}

fn exact(r: f64, big: f64) -> f64 {
    (big / r).ln() / (2.0 * PI)
}

#[test]
fn round_annulus_within_two_percent() {
    for (r, big) in [(1.0, 2.0), (1.0, E)] {
        let est = estimate_modulus(&round(r, big), &cfg(256)).unwrap();
        let rel = (est.value - exact(r, big)).abs() / exact(r, big);
        assert!(rel < 0.02, "({r},{big}): {} vs {} ({rel})", est.value, exact(r, big));
        assert!(est.residual <= 1e-10);
        assert!(!est.degenerate);
    }
}

#[test]
fn history_is_ordered() {
    let est = estimate_modulus(&round(1.0, 2.0), &ModulusConfig { history: true, ..cfg(256) }).unwrap();
    let res: Vec<usize> = est.refinement_history.iter().map(|h| h.0).collect();
    assert_eq!(res, vec![64, 128, 256]);
    assert!(est.discretization_error().unwrap() < 0.01 * est.value);
}

#[test]
fn swapped_roles_agree() {
    let a = estimate_modulus(&round(1.0, 3.0), &cfg(128)).unwrap();
    let b = estimate_modulus(&round(1.0, 3.0), &ModulusConfig { swap_roles: true, ..cfg(128) }).unwrap();
    assert!((a.value - b.value).abs() < 1e-3 * a.value);
}

#[test]
fn similarity_invariance() {
    let reg = AnnulusRegion::new(circle(Complex64::new(0.2, 0.0), 2.0, 1024), circle(Complex64::new(-0.3, 0.1), 0.7, 1024));
    let map = |v: &Vec<Complex64>| v.iter().map(|z| 2.0 * z + 1.0).collect::<Vec<_>>();
    let img = AnnulusRegion::new(map(&reg.outer), map(&reg.inner));
    let a = estimate_modulus(&reg, &cfg(256)).unwrap();
    let b = estimate_modulus(&img, &cfg(256)).unwrap();
    assert!((a.value - b.value).abs() < 0.01 * a.value);
}

#[test]
fn touching_circles_are_degenerate() {
    let o = circle(Complex64::new(0.0, 0.0), 2.0, 1024);
    let i = circle(Complex64::new(1.0, 0.0), 1.0, 1024);
    let est = estimate_modulus(&AnnulusRegion::new(o, i), &cfg(128)).unwrap();
    assert!(est.degenerate);
    assert_eq!(est.value, 0.0);
    assert!(!est.pinch_points.is_empty());
}

#[test]
fn narrow_gap_needs_finer_grid() {
    let o = circle(Complex64::new(0.0, 0.0), 2.0, 1024);
    let i = circle(Complex64::new(0.95, 0.0), 1.0, 1024);
    let err = estimate_modulus(&AnnulusRegion::new(o, i), &cfg(64)).unwrap_err();
    assert!(matches!(err, ModulusError::ResolutionTooCoarse { .. }));
}

#[test]
fn nested_wrong_way_is_disconnected() {
    let o = circle(Complex64::new(0.0, 0.0), 1.0, 512);
    let i = circle(Complex64::new(5.0, 0.0), 1.0, 512);
    let err = estimate_modulus(&AnnulusRegion::new(o, i), &cfg(64)).unwrap_err();
    assert_eq!(err, ModulusError::Disconnected);
}

#[test]
fn concentric_split_is_additive() {
    let d = groetzsch_defect(&round(1.0, 4.0), &[round(1.0, 2.0), round(2.0, 4.0)], &cfg(256)).unwrap();
    assert!(d.holds());
    assert!(d.defect.abs() <= d.tolerance, "{d:?}");
}

#[test]
fn identity_split_has_zero_defect() {
    let d = groetzsch_defect(&round(1.0, 3.0), &[round(1.0, 3.0)], &cfg(128)).unwrap();
    assert_eq!(d.defect, 0.0);
}

#[test]
fn off_centre_split_is_superadditive() {
    let mid = circle(Complex64::new(0.4, 0.2), 2.0, 2048);
    let inner = circle(Complex64::new(0.0, 0.0), 1.0, 2048);
    let outer = circle(Complex64::new(0.0, 0.0), 4.0, 2048);
    let parts = [AnnulusRegion::new(mid.clone(), inner.clone()), AnnulusRegion::new(outer.clone(), mid)];
    let d = groetzsch_defect(&AnnulusRegion::new(outer, inner), &parts, &cfg(256)).unwrap();
    assert!(d.defect > 0.0, "{d:?}");
}

#[test]
fn crossing_parts_are_rejected() {
    let parts = [round(0.5, 2.0)];
    let err = groetzsch_defect(&round(1.0, 3.0), &parts, &cfg(64)).unwrap_err();
    assert!(matches!(err, ModulusError::NotASubdivision(_)));
}

#[test]
fn squaring_doubles_the_modulus() {
    let child = round(1.2, 1.8);
    let parent = round(1.44, 3.24);
    let v = covering_ratio_check(&parent, &child, Mark::Critical, 0.01, &cfg(256)).unwrap();
    assert!(v.holds, "{v:?}");
    let v = covering_ratio_check(&child, &child, Mark::OffCritical, 0.01, &cfg(128)).unwrap();
    assert!(v.holds && v.ratio == Some(1.0));
    let v = covering_ratio_check(&child, &child, Mark::Critical, 0.01, &cfg(128)).unwrap();
    assert!(!v.holds);
}
