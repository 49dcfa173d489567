//! The irq `G(δ)` of a group with a bijection fixing the identity:
//! `x * u = x δ(x⁻¹ u)` and `x \ u = x δ⁻¹(x⁻¹ u)`.

use crate::element::{coord_distance, real, to_f64, Element, Real};
use crate::error::{IrqError, Result};
use crate::irq::{ClosedFormDivision, Descriptor, Irq, IterExponent};
use crate::sampling::{ball_point, rng};

/// A group on `ℝ^dim` in global coordinates.
pub trait Group: Send + Sync {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn product(&self, a: &[Real], b: &[Real]) -> Vec<Real>;
    fn inverse(&self, a: &[Real]) -> Vec<Real>;

    fn identity(&self) -> Vec<Real> {
        vec![real(0.0); self.dim()]
    }

    /// Grading degree (1-based layer) of each coordinate.
    fn weights(&self) -> Vec<u32> {
        vec![1; self.dim()]
    }

    fn is_abelian(&self) -> bool {
        false
    }
}

/// Exponent for `powi`. Levels are bounded by `IterExponent::MAX`.
pub(crate) fn pow_exponent(n: i64) -> i32 {
    i32::try_from(n).expect("dilation power exceeds i32")
}

/// A bijection `δ` with `δ(e) = e`.
pub trait Dilation: Send + Sync {
    fn describe(&self) -> String;
    fn apply(&self, x: &[Real]) -> Vec<Real>;
    fn apply_inverse(&self, x: &[Real]) -> Vec<Real>;
    /// `δⁿ(x)`, with `δ⁻¹` for negative `n`.
    fn apply_pow(&self, x: &[Real], n: i64) -> Vec<Real> {
        let mut acc = x.to_vec();
        for _ in 0..n.unsigned_abs() {
            acc = if n > 0 {
                self.apply(&acc)
            } else {
                self.apply_inverse(&acc)
            };
        }
        acc
    }
    fn is_morphism(&self) -> bool;
    /// `δⁿ(x) → e` for every `x`.
    fn is_contractive(&self) -> bool;
    /// `Some(λ)` when `δ(x) = λ x` in coordinates.
    fn scalar_factor(&self) -> Option<f64> {
        None
    }
}

/// Residual metric of a group carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupMetric {
    /// Euclidean distance of coordinate vectors.
    Coordinate,
    /// `‖a⁻¹ b‖` in the homogeneous norm of the grading.
    Homogeneous,
}

/// Group-level access to a `G(δ)` carrier.
pub trait GroupStructure: Send + Sync {
    fn product(&self, a: &Element, b: &Element) -> Element;
    fn inverse(&self, a: &Element) -> Element;
    fn identity(&self) -> Element;
    fn delta(&self, a: &Element) -> Element;
    fn delta_inverse(&self, a: &Element) -> Element;
    fn delta_is_morphism(&self) -> bool;
    fn homogeneous_norm(&self, g: &Element) -> f64;
    /// Apply `δ` `n` times (`δ⁻¹` for negative `n`).
    fn delta_pow(&self, a: &Element, n: i64) -> Element {
        let mut acc = a.clone();
        for _ in 0..n.abs() {
            acc = if n > 0 {
                self.delta(&acc)
            } else {
                self.delta_inverse(&acc)
            };
        }
        acc
    }
}

#[derive(Debug, Clone)]
pub struct GroupIrq<G, D> {
    group: G,
    delta: D,
    metric: GroupMetric,
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(IrqError::EpsilonOutOfRange(epsilon))
    }
}

/// Build `G(δ)`. Rejects `δ` unless it fixes the identity and `δ⁻¹` inverts
/// it on seeded samples.
pub fn make_group_irq<G: Group, D: Dilation>(group: G, delta: D) -> Result<GroupIrq<G, D>> {
    let e = group.identity();
    let de = delta.apply(&e);
    if coord_distance(&de, &e) > 1e-12 {
        return Err(IrqError::Construction(format!(
            "{} does not fix the identity of {}: δ(e) = {:?}",
            delta.describe(),
            group.name(),
            Element::from_reals(de)
        )));
    }
    let mut r = rng(0x5eed);
    let zero = vec![0.0; group.dim()];
    for _ in 0..32 {
        let x: Vec<Real> = ball_point(&mut r, &zero, 4.0).into_iter().map(real).collect();
        let back = delta.apply_inverse(&delta.apply(&x));
        let fwd = delta.apply(&delta.apply_inverse(&x));
        let err = coord_distance(&back, &x).max(coord_distance(&fwd, &x));
        if err > 1e-12 {
            return Err(IrqError::Construction(format!(
                "δ⁻¹ does not invert {} (residual {err:e})",
                delta.describe()
            )));
        }
    }
    Ok(GroupIrq {
        group,
        delta,
        metric: GroupMetric::Coordinate,
    })
}

impl<G: Group, D: Dilation> GroupIrq<G, D> {
    pub fn with_metric(mut self, metric: GroupMetric) -> Self {
        self.metric = metric;
        self
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn dilation(&self) -> &D {
        &self.delta
    }

    pub fn metric_kind(&self) -> GroupMetric {
        self.metric
    }

    /// `max_i ‖g_i‖^{1/i}` over the layers of the grading.
    pub fn homogeneous_norm(&self, g: &[Real]) -> f64 {
        let weights = self.group.weights();
        let top = weights.iter().copied().max().unwrap_or(1);
        (1..=top)
            .map(|layer| {
                let sq: f64 = g
                    .iter()
                    .zip(&weights)
                    .filter(|(_, w)| **w == layer)
                    .map(|(x, _)| to_f64(*x * *x))
                    .sum();
                sq.sqrt().powf(1.0 / f64::from(layer))
            })
            .fold(0.0, f64::max)
    }
}

impl<G: Group, D: Dilation> Irq for GroupIrq<G, D> {
    fn name(&self) -> String {
        format!("{}({})", self.group.name(), self.delta.describe())
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::Continuous {
            dim: self.group.dim(),
        }
    }

    fn star(&self, x: &Element, u: &Element) -> Element {
        let (x, u) = (x.reals(), u.reals());
        let rel = self.group.product(&self.group.inverse(x), u);
        Element::from_reals(self.group.product(x, &self.delta.apply(&rel)))
    }

    fn back(&self, x: &Element, u: &Element) -> Element {
        let (x, u) = (x.reals(), u.reals());
        let rel = self.group.product(&self.group.inverse(x), u);
        Element::from_reals(self.group.product(x, &self.delta.apply_inverse(&rel)))
    }

    /// `x δᵏ(x⁻¹ u)`.
    fn star_pow(&self, k: i64, x: &Element, u: &Element) -> Element {
        let (x, u) = (x.reals(), u.reals());
        let rel = self.group.product(&self.group.inverse(x), u);
        Element::from_reals(self.group.product(x, &self.delta.apply_pow(&rel, k)))
    }

    fn metric(&self, a: &Element, b: &Element) -> f64 {
        let (a, b) = (a.reals(), b.reals());
        match self.metric {
            GroupMetric::Coordinate => coord_distance(a, b),
            GroupMetric::Homogeneous => {
                self.homogeneous_norm(&self.group.product(&self.group.inverse(a), b))
            }
        }
    }

    fn base_point(&self) -> Element {
        Element::from_reals(self.group.identity())
    }

    fn sample(&self, seed: u64, count: usize, radius: f64) -> Vec<Element> {
        let mut r = rng(seed);
        let center: Vec<f64> = Element::from_reals(self.group.identity()).to_f64();
        (0..count)
            .map(|_| Element::point(&ball_point(&mut r, &center, radius)))
            .collect()
    }

    fn is_uniform(&self) -> bool {
        self.delta.is_contractive()
    }

    fn group_structure(&self) -> Option<&dyn GroupStructure> {
        Some(self)
    }

    fn closed_form_division(&self) -> Option<&dyn ClosedFormDivision> {
        (self.group.is_abelian() && self.delta.scalar_factor().is_some()).then_some(self as _)
    }
}

impl<G: Group, D: Dilation> GroupStructure for GroupIrq<G, D> {
    fn product(&self, a: &Element, b: &Element) -> Element {
        Element::from_reals(self.group.product(a.reals(), b.reals()))
    }

    fn inverse(&self, a: &Element) -> Element {
        Element::from_reals(self.group.inverse(a.reals()))
    }

    fn identity(&self) -> Element {
        Element::from_reals(self.group.identity())
    }

    fn delta(&self, a: &Element) -> Element {
        Element::from_reals(self.delta.apply(a.reals()))
    }

    fn delta_inverse(&self, a: &Element) -> Element {
        Element::from_reals(self.delta.apply_inverse(a.reals()))
    }

    fn delta_is_morphism(&self) -> bool {
        self.delta.is_morphism()
    }

    fn delta_pow(&self, a: &Element, n: i64) -> Element {
        Element::from_reals(self.delta.apply_pow(a.reals(), n))
    }

    fn homogeneous_norm(&self, g: &Element) -> f64 {
        GroupIrq::homogeneous_norm(self, g.reals())
    }
}

impl<G: Group, D: Dilation> ClosedFormDivision for GroupIrq<G, D> {
    /// Solves `y + λ^k (a - y) = b`, i.e. `y = (b - λ^k a) / (1 - λ^k)`.
    fn divide(&self, k: IterExponent, b: &Element, a: &Element) -> Element {
        let lambda = self
            .delta
            .scalar_factor()
            .expect("closed-form division needs a scalar dilation");
        let lk = real(lambda).powi(k.get() as i32);
        let denom = real(1.0) - lk;
        let y = b
            .reals()
            .iter()
            .zip(a.reals())
            .map(|(b, a)| (*b - lk * *a) / denom)
            .collect();
        Element::from_reals(y)
    }
}
