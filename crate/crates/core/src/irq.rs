//! The irq interface and the operations derived from it.
//!
//! An idempotent right quasigroup is a set with operations `*` and `\` such
//! that `x * (x \ y) = x \ (x * y) = y` and `x * x = x \ x = x`. Every other
//! operation here (iterated levels, difference, sum, inverse) is written only
//! in terms of those two.

use std::fmt;

use crate::carriers::GroupStructure;
use crate::element::Element;
use crate::error::{IrqError, Result};

/// What kind of set an irq lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Descriptor {
    /// Coordinate points of a fixed dimension.
    Continuous { dim: usize },
    /// Labels `0..cardinality`.
    Finite { cardinality: u64 },
}

/// Closed-form right division `b / a`, when a carrier knows one.
pub trait ClosedFormDivision {
    fn divide(&self, k: IterExponent, b: &Element, a: &Element) -> Element;
}

/// Capability bundle for an idempotent right quasigroup.
///
/// Implementations must be pure: the same inputs always give the same output.
pub trait Irq: Send + Sync {
    fn name(&self) -> String;

    fn descriptor(&self) -> Descriptor;

    fn star(&self, x: &Element, u: &Element) -> Element;

    fn back(&self, x: &Element, u: &Element) -> Element;

    /// `x *_k u`. The default applies `x *` (or `x \` for `k < 0`) `|k|`
    /// times; carriers with a closed form for the iterate override it.
    fn star_pow(&self, k: i64, x: &Element, u: &Element) -> Element {
        let mut acc = u.clone();
        for _ in 0..k.unsigned_abs() {
            acc = if k > 0 {
                self.star(x, &acc)
            } else {
                self.back(x, &acc)
            };
        }
        acc
    }

    /// Distance used for residuals and Cauchy tests.
    fn metric(&self, a: &Element, b: &Element) -> f64;

    /// Point that seeded samples are centered on.
    fn base_point(&self) -> Element;

    /// `count` seeded points within `radius` of the base point (in the
    /// carrier metric). Finite carriers ignore the radius.
    fn sample(&self, seed: u64, count: usize, radius: f64) -> Vec<Element>;

    /// Whether `*` is contractive and the iterated sums and differences
    /// converge, so that limit operations are meaningful.
    fn is_uniform(&self) -> bool;

    /// True when operations are exact (finite carriers).
    fn is_exact(&self) -> bool {
        false
    }

    /// All elements, for finite carriers.
    fn elements(&self) -> Option<Vec<Element>> {
        None
    }

    fn contains(&self, e: &Element) -> bool {
        match (self.descriptor(), e) {
            (Descriptor::Continuous { dim }, Element::Point(c)) => c.len() == dim && e.is_finite(),
            (Descriptor::Finite { cardinality }, Element::Label(l)) => *l < cardinality,
            _ => false,
        }
    }

    /// Group structure, for carriers built as `G(δ)`.
    fn group_structure(&self) -> Option<&dyn GroupStructure> {
        None
    }

    fn closed_form_division(&self) -> Option<&dyn ClosedFormDivision> {
        None
    }
}

/// Nonzero iteration exponent `k` for the level-`k` operations `*_k`, `\_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IterExponent(i64);

impl IterExponent {
    /// Bound on `|k|`; star_k costs `|k|` applications of `*`.
    pub const MAX: i64 = 1_000_000;

    pub fn new(k: i64) -> Result<Self> {
        if k == 0 || k.abs() > Self::MAX {
            Err(IrqError::InvalidExponent { k, max: Self::MAX })
        } else {
            Ok(IterExponent(k))
        }
    }

    pub const ONE: IterExponent = IterExponent(1);

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn neg(self) -> Self {
        IterExponent(-self.0)
    }
}

impl TryFrom<i64> for IterExponent {
    type Error = IrqError;
    fn try_from(k: i64) -> Result<Self> {
        IterExponent::new(k)
    }
}

impl fmt::Display for IterExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `x *_k u`: `k` left applications of `x *` for `k > 0`, `x \_{-k} u` for `k < 0`.
pub fn star_k<I: Irq + ?Sized>(irq: &I, k: IterExponent, x: &Element, u: &Element) -> Element {
    debug_assert!(irq.contains(x) && irq.contains(u));
    irq.star_pow(k.get(), x, u)
}

/// `x \_k u`, the inverse of `x *_k ·`.
pub fn back_k<I: Irq + ?Sized>(irq: &I, k: IterExponent, x: &Element, u: &Element) -> Element {
    debug_assert!(irq.contains(x) && irq.contains(u));
    irq.star_pow(-k.get(), x, u)
}

/// Difference `(xuv)_k = (x *_k u) \_k (x *_k v)`, written `v -_k^x u`.
pub fn difference_k<I: Irq + ?Sized>(
    irq: &I,
    k: IterExponent,
    x: &Element,
    u: &Element,
    v: &Element,
) -> Element {
    let xu = star_k(irq, k, x, u);
    let xv = star_k(irq, k, x, v);
    back_k(irq, k, &xu, &xv)
}

/// Sum `)xuv(_k = x \_k ((x *_k u) *_k v)`, written `u +_k^x v`.
pub fn sum_k<I: Irq + ?Sized>(
    irq: &I,
    k: IterExponent,
    x: &Element,
    u: &Element,
    v: &Element,
) -> Element {
    let xu = star_k(irq, k, x, u);
    let w = star_k(irq, k, &xu, v);
    back_k(irq, k, x, &w)
}

/// Inverse `inv_k(x, u) = (x *_k u) \_k x`, written `-_k^x u`.
pub fn inverse_k<I: Irq + ?Sized>(irq: &I, k: IterExponent, x: &Element, u: &Element) -> Element {
    let xu = star_k(irq, k, x, u);
    back_k(irq, k, &xu, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carriers::{make_dihedral_quandle, make_euclidean};

    fn k(n: i64) -> IterExponent {
        IterExponent::new(n).unwrap()
    }

    fn p(x: f64) -> Element {
        Element::point(&[x])
    }

    fn close(irq: &dyn Irq, a: &Element, b: &Element) -> bool {
        irq.metric(a, b) < 1e-14
    }

    #[test]
    fn zero_and_huge_exponents_are_rejected() {
        assert!(matches!(
            IterExponent::new(0),
            Err(IrqError::InvalidExponent { k: 0, .. })
        ));
        assert!(IterExponent::new(IterExponent::MAX + 1).is_err());
        assert!(IterExponent::new(-IterExponent::MAX).is_ok());
    }

    #[test]
    fn euclidean_level_operations_match_hand_values() {
        let e = make_euclidean(1, 0.5).unwrap();
        assert!(close(&e, &star_k(&e, k(1), &p(0.0), &p(4.0)), &p(2.0)));
        assert!(close(&e, &back_k(&e, k(1), &p(0.0), &p(1.0)), &p(2.0)));
        assert!(close(&e, &difference_k(&e, k(1), &p(0.0), &p(1.0), &p(2.0)), &p(1.5)));
        assert!(close(&e, &sum_k(&e, k(1), &p(0.0), &p(1.0), &p(2.0)), &p(2.5)));
        assert!(close(&e, &inverse_k(&e, k(1), &p(0.0), &p(1.0)), &p(-0.5)));
    }

    #[test]
    fn negative_levels_swap_star_and_back() {
        let e = make_euclidean(1, 0.5).unwrap();
        let (x, u) = (p(0.3), p(-1.7));
        assert_eq!(star_k(&e, k(-2), &x, &u), back_k(&e, k(2), &x, &u));
        assert_eq!(back_k(&e, k(-3), &x, &u), star_k(&e, k(3), &x, &u));
    }

    #[test]
    fn dihedral_levels_follow_the_table() {
        let q = make_dihedral_quandle(5).unwrap();
        let l = Element::label;
        assert_eq!(star_k(&q, k(2), &l(1), &l(2)), l(2));
        assert_eq!(back_k(&q, k(1), &l(1), &l(0)), l(2));
        for x in 0..5 {
            for n in [-3, -1, 1, 2, 4] {
                assert_eq!(star_k(&q, k(n), &l(x), &l(x)), l(x));
            }
        }
    }

    #[test]
    fn trivial_relations_on_the_diagonal() {
        let e = make_euclidean(2, 0.3).unwrap();
        let x = Element::point(&[0.4, -1.1]);
        let u = Element::point(&[2.0, 0.5]);
        for n in [-2, 1, 3] {
            assert!(close(&e, &difference_k(&e, k(n), &x, &x, &u), &u));
            assert!(close(&e, &difference_k(&e, k(n), &x, &u, &u), &star_k(&e, k(n), &x, &u)));
            assert!(close(&e, &sum_k(&e, k(n), &x, &x, &u), &u));
            assert!(close(&e, &inverse_k(&e, k(n), &x, &x), &x));
        }
    }
}
