//! Exact arcs of the circle of angles. A puzzle piece meets the equipotential
//! at its level in a finite union of such arcs.

use crate::rays::Angle;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

/// Counter-clockwise arc from `start` to `end`; never the full circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arc {
    pub start: Angle,
    pub end: Angle,
}

impl Arc {
    pub fn new(start: Angle, end: Angle) -> Arc {
        debug_assert!(start != end, "degenerate arc");
        Arc { start, end }
    }

    pub fn len(&self) -> BigRational {
        self.start.ccw_to(&self.end)
    }

    pub fn len_f64(&self) -> f64 {
        self.len().to_f64().unwrap_or(0.0)
    }

    /// Strict interior membership.
    pub fn contains_interior(&self, x: &Angle) -> bool {
        let off = self.start.ccw_to(x);
        !off.is_zero() && off < self.len()
    }

    pub fn contains_closed(&self, x: &Angle) -> bool {
        let off = self.start.ccw_to(x);
        off <= self.len()
    }

    /// Closed containment of `other` in `self`.
    pub fn contains_arc(&self, other: &Arc) -> bool {
        let off = self.start.ccw_to(&other.start);
        off.clone() < self.len() && off + other.len() <= self.len()
    }

    pub fn interiors_meet(&self, other: &Arc) -> bool {
        self.start == other.start || self.contains_interior(&other.start) || other.contains_interior(&self.start)
    }

    /// Angle at fraction `num/den` along the arc.
    pub fn point_at(&self, num: i64, den: i64) -> Angle {
        let f = BigRational::new(BigInt::from(num), BigInt::from(den));
        Angle::from_ratio(self.start.as_ratio() + self.len() * f)
    }

    pub fn midpoint(&self) -> Angle {
        self.point_at(1, 2)
    }

    /// The two arcs mapped onto `self` by angle doubling.
    pub fn lift(&self) -> (Arc, Arc) {
        let half_len = self.len() / BigInt::from(2);
        let (s0, s1) = self.start.preimages();
        let e0 = Angle::from_ratio(s0.as_ratio() + &half_len);
        let e1 = Angle::from_ratio(s1.as_ratio() + &half_len);
        (Arc::new(s0, e0), Arc::new(s1, e1))
    }
}

/// Disjoint arcs kept in increasing order of their start angle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ArcSet {
    arcs: Vec<Arc>,
}

impl ArcSet {
    pub fn new(mut arcs: Vec<Arc>) -> ArcSet {
        arcs.sort();
        ArcSet { arcs }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn total_len(&self) -> BigRational {
        self.arcs.iter().map(Arc::len).fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn contains_interior(&self, x: &Angle) -> bool {
        self.arcs.iter().any(|a| a.contains_interior(x))
    }

    pub fn contains_closed(&self, x: &Angle) -> bool {
        self.arcs.iter().any(|a| a.contains_closed(x))
    }

    /// Every arc of `other` sits inside one arc of `self`.
    pub fn contains_set(&self, other: &ArcSet) -> bool {
        other.arcs.iter().all(|o| self.arcs.iter().any(|a| a.contains_arc(o)))
    }

    pub fn interiors_disjoint(&self, other: &ArcSet) -> bool {
        self.arcs.iter().all(|a| other.arcs.iter().all(|b| !a.interiors_meet(b)))
    }

    /// All endpoint angles, each arc contributing `start` then `end`.
    pub fn endpoints(&self) -> impl Iterator<Item = &Angle> {
        self.arcs.iter().flat_map(|a| [&a.start, &a.end])
    }

    /// Full preimage under doubling.
    pub fn lift(&self) -> ArcSet {
        ArcSet::new(
            self.arcs
                .iter()
                .flat_map(|a| {
                    let (x, y) = a.lift();
                    [x, y]
                })
                .collect(),
        )
    }

    /// Splits the preimage into the arcs inside `(tau/2, tau/2 + 1/2)` and the rest.
    pub fn lift_split(&self, tau: &Angle) -> (ArcSet, ArcSet) {
        let (h0, h1) = tau.preimages();
        let semi = Arc::new(h0, h1);
        let (inside, outside): (Vec<Arc>, Vec<Arc>) = self.lift().arcs.into_iter().partition(|a| semi.contains_arc(a));
        (ArcSet::new(inside), ArcSet::new(outside))
    }

    /// An angle interior to the longest arc.
    pub fn interior_angle(&self) -> Angle {
        self.longest().midpoint()
    }

    pub fn longest(&self) -> &Arc {
        self.arcs.iter().max_by(|a, b| a.len().cmp(&b.len())).expect("non-empty arc set")
    }

    /// Arcs forward under doubling, as a multiset of images.
    pub fn doubled(&self) -> Vec<Arc> {
        self.arcs
            .iter()
            .map(|a| Arc::new(a.start.double(), Angle::from_ratio(a.start.double().as_ratio() + a.len() * BigInt::from(2))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn arc(x: &str, y: &str) -> Arc {
        Arc::new(a(x), a(y))
    }

    #[test]
    fn wrapping_arc_membership() {
        let w = arc("4/7", "1/7");
        assert!(w.contains_interior(&Angle::zero()));
        assert!(w.contains_interior(&a("6/7")));
        assert!(!w.contains_interior(&a("2/7")));
        assert!(!w.contains_interior(&a("1/7")));
        assert!(w.contains_closed(&a("1/7")));
        assert_eq!(w.len(), BigRational::new(4.into(), 7.into()));
    }

    #[test]
    fn lift_of_c_i_critical_value_sector() {
        let s = ArcSet::new(vec![arc("1/7", "2/7")]);
        let l = s.lift();
        assert_eq!(l.arcs(), &[arc("1/14", "1/7"), arc("4/7", "9/14")]);
        let (i, o) = s.lift_split(&a("1/6"));
        assert_eq!(i.len() + o.len(), 2);
    }

    #[test]
    fn containment_and_disjointness() {
        let big = ArcSet::new(vec![arc("4/7", "1/7")]);
        let small = ArcSet::new(vec![arc("1/14", "1/7"), arc("4/7", "9/14")]);
        assert!(big.contains_set(&small));
        assert!(!small.contains_set(&big));
        let other = ArcSet::new(vec![arc("1/7", "2/7")]);
        assert!(other.interiors_disjoint(&big));
        assert!(!small.interiors_disjoint(&big));
    }

    #[test]
    fn doubling_inverts_lift() {
        let s = arc("5/7", "1/7");
        let (x, y) = s.lift();
        for l in [x, y] {
            let d = ArcSet::new(vec![l]).doubled();
            assert_eq!(d[0].start, s.start);
            assert_eq!(d[0].len(), s.len());
        }
    }
}
