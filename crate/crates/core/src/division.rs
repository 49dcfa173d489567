//! Right division `b /_k a`, loop isotopes, and the symmetric-space
//! operations `inv_k`, `underline_inv_k` and `T`.

use serde::{Deserialize, Serialize};

use crate::axioms::{effective_tol, report_over, tuples, worst, AxiomReport};
use crate::carriers::GroupStructure;
use crate::element::Element;
use crate::emergent::{emergent_inverse, settle, LimitConfig};
use crate::error::{IrqError, Result};
use crate::irq::{back_k, inverse_k, star_k, Irq, IterExponent};
use crate::sampling::Sampling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisionKind {
    /// A carrier formula (Euclidean space, the hyperbolic plane).
    ClosedForm,
    /// `∏_{p≥0} δ^{pk}(b δ^k(a)⁻¹)` on `G(δ)` with a morphism `δ`.
    TruncatedProduct,
    /// `y ← b (y *_k a)⁻¹ y` from `y = b` on any `G(δ)`.
    FixedPoint,
}

/// How to solve `y *_k a = b`, and the residual `d(y *_k a, b)` to accept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivisionMethod {
    pub kind: DivisionKind,
    pub max_terms: usize,
    pub tol: f64,
}

impl DivisionMethod {
    pub fn new(kind: DivisionKind, max_terms: usize, tol: f64) -> Result<Self> {
        if max_terms == 0 || !(tol > 0.0) {
            return Err(IrqError::InvalidParameter(format!(
                "division needs max_terms >= 1 and tol > 0, got {max_terms} and {tol}"
            )));
        }
        Ok(DivisionMethod {
            kind,
            max_terms,
            tol,
        })
    }

    pub fn closed_form() -> Self {
        DivisionMethod {
            kind: DivisionKind::ClosedForm,
            max_terms: 1,
            tol: 1e-10,
        }
    }

    pub fn truncated_product() -> Self {
        DivisionMethod {
            kind: DivisionKind::TruncatedProduct,
            max_terms: 200,
            tol: 1e-10,
        }
    }

    pub fn fixed_point() -> Self {
        DivisionMethod {
            kind: DivisionKind::FixedPoint,
            max_terms: 500,
            tol: 1e-10,
        }
    }

    /// Closed form when the carrier has one, else the truncated product on
    /// morphism `G(δ)`, else fixed-point iteration.
    pub fn best_for<I: Irq + ?Sized>(irq: &I) -> Self {
        if irq.closed_form_division().is_some() {
            Self::closed_form()
        } else if irq.group_structure().is_some_and(|g| g.delta_is_morphism()) {
            Self::truncated_product()
        } else {
            Self::fixed_point()
        }
    }
}

/// A solution of `y *_k a = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Division {
    pub value: Element,
    /// Product factors or fixed-point steps used (1 for closed forms).
    pub terms: usize,
    /// `d(y *_k a, b)`.
    pub residual: f64,
}

/// Factors of the truncated product stop once within this homogeneous
/// distance of the identity.
pub const FACTOR_CUTOFF: f64 = 1e-15;

fn unsupported<I: Irq + ?Sized>(irq: &I, what: &str) -> IrqError {
    IrqError::Unsupported {
        carrier: irq.name(),
        what: what.to_string(),
    }
}

/// `y = b /_k a`, the solution of `y *_k a = b`.
///
/// For `k < 0`, `y *_k a = b` is `y *_{-k} b = a`, so `b /_k a = a /_{-k} b`.
pub fn right_divide_k<I: Irq + ?Sized>(
    irq: &I,
    k: IterExponent,
    b: &Element,
    a: &Element,
    method: &DivisionMethod,
) -> Result<Division> {
    let (value, terms) = match method.kind {
        DivisionKind::ClosedForm => {
            let cf = irq
                .closed_form_division()
                .ok_or_else(|| unsupported(irq, "closed-form division"))?;
            (cf.divide(k, b, a), 1)
        }
        DivisionKind::TruncatedProduct => {
            let g = irq
                .group_structure()
                .filter(|g| g.delta_is_morphism())
                .ok_or_else(|| unsupported(irq, "truncated-product division (needs G(δ) with a morphism δ)"))?;
            let (m, b, a) = if k.get() > 0 { (k.get(), b, a) } else { (-k.get(), a, b) };
            truncated_product(g, m, b, a, method.max_terms)
        }
        DivisionKind::FixedPoint => {
            let g = irq
                .group_structure()
                .ok_or_else(|| unsupported(irq, "fixed-point division (needs G(δ))"))?;
            let (m, b, a) = if k.get() > 0 { (k, b, a) } else { (k.neg(), a, b) };
            fixed_point(irq, g, m, b, a, method.max_terms)
        }
    };
    let residual = irq.metric(&star_k(irq, k, &value, a), b);
    if residual.is_nan() || residual > method.tol {
        return Err(IrqError::DivisionFailed {
            terms,
            residual,
            tol: method.tol,
        });
    }
    Ok(Division {
        value,
        terms,
        residual,
    })
}

/// With `D = δ^m` a morphism, `y D(y⁻¹ a) = b` reads `y D(y)⁻¹ = c` with
/// `c = b D(a)⁻¹`, solved by `y = c D(c) D²(c) ⋯`.
fn truncated_product(
    g: &dyn GroupStructure,
    m: i64,
    b: &Element,
    a: &Element,
    max_terms: usize,
) -> (Element, usize) {
    let c = g.product(b, &g.inverse(&g.delta_pow(a, m)));
    let mut y = c.clone();
    let mut factor = c;
    let mut terms = 1;
    while terms < max_terms {
        factor = g.delta_pow(&factor, m);
        if g.homogeneous_norm(&factor) <= FACTOR_CUTOFF {
            break;
        }
        y = g.product(&y, &factor);
        terms += 1;
    }
    (y, terms)
}

/// `y ← b (y *_k a)⁻¹ y`. For a morphism `δ` this is `y ← c δ^k(y)`, the
/// iteration whose limit is the truncated product. Stops once a step moves
/// `y` by less than [`FACTOR_CUTOFF`] in homogeneous norm.
fn fixed_point<I: Irq + ?Sized>(
    irq: &I,
    g: &dyn GroupStructure,
    k: IterExponent,
    b: &Element,
    a: &Element,
    max_terms: usize,
) -> (Element, usize) {
    let mut y = b.clone();
    for step in 1..=max_terms {
        let ya = star_k(irq, k, &y, a);
        let next = g.product(&g.product(b, &g.inverse(&ya)), &y);
        let moved = g.homogeneous_norm(&g.product(&g.inverse(&y), &next));
        y = next;
        if moved <= FACTOR_CUTOFF || moved.is_nan() {
            return (y, step);
        }
    }
    (y, max_terms)
}

/// `u ∘^x_k v = (u /_k x) *_k (x \_k v)`, a loop with identity `x`.
///
/// Fails when `x \_k v` is not a finite point of the carrier, as happens on
/// the hyperbolic plane for large `k` (it lies at distance `ε⁻ᵏ d(x, v)`).
pub fn loop_isotope_k<I: Irq + ?Sized>(
    irq: &I,
    k: IterExponent,
    x: &Element,
    u: &Element,
    v: &Element,
    method: &DivisionMethod,
) -> Result<Element> {
    let ux = right_divide_k(irq, k, u, x, method)?.value;
    let xv = back_k(irq, k, x, v);
    if !irq.contains(&xv) {
        return Err(IrqError::NotInCarrier {
            carrier: irq.name(),
            detail: format!("x \\_{k} v leaves the representable range"),
        });
    }
    Ok(star_k(irq, k, &ux, &xv))
}

/// `inv_k(x, y) = (x *_k y) \_k x`.
pub fn inv_k<I: Irq + ?Sized>(irq: &I, k: IterExponent, x: &Element, y: &Element) -> Element {
    inverse_k(irq, k, x, y)
}

/// `underline_inv_k(u, v) = inv_k(u, v /_k u)`.
pub fn underline_inv_k<I: Irq + ?Sized>(
    irq: &I,
    k: IterExponent,
    u: &Element,
    v: &Element,
    method: &DivisionMethod,
) -> Result<Element> {
    let vu = right_divide_k(irq, k, v, u, method)?.value;
    Ok(inv_k(irq, k, u, &vu))
}

/// `T(y, x) = (inv(x, y), x * y)` at level 1. `T ∘ T` is the identity.
pub fn t_map<I: Irq + ?Sized>(irq: &I, y: &Element, x: &Element) -> (Element, Element) {
    (inv_k(irq, IterExponent::ONE, x, y), irq.star(x, y))
}

/// `T ∘ T = id` on all pairs of a small finite carrier, else on sampled pairs.
pub fn check_t_involution<I: Irq + ?Sized>(irq: &I, sampling: &Sampling, tol: f64) -> AxiomReport {
    let tol = effective_tol(irq, tol);
    let pairs = tuples(irq, sampling, 2);
    report_over("6.5", &pairs, tol, |t| {
        let (y, x) = (&t[0], &t[1]);
        let (y1, x1) = t_map(irq, y, x);
        let (y2, x2) = t_map(irq, &y1, &x1);
        worst(irq.metric(&y2, y), irq.metric(&x2, x))
    })
}

/// Levels at which `underline_inv_k` is checked.
pub const UNDERLINE_LEVELS: [i64; 3] = [1, 2, 3];

/// Radius of the ball around `x` in which L4 is audited.
pub const L4_RADIUS: f64 = 0.5;
/// Pairs closer than `L4_DELTA_FACTOR · L4_RADIUS` are skipped.
pub const L4_DELTA_FACTOR: f64 = 1e-3;
/// L4 passes when the audited constant is at least this large.
pub const L4_MIN_CONSTANT: f64 = 1e-3;

/// Loos axioms for `inv_∞`:
/// `L1` `inv(x, x) = x`,
/// `L2` `inv(x, inv(y, z)) = inv(inv(x, y), inv(x, z))`,
/// `L3` `inv(x, inv(x, y)) = y`,
/// `L4` audited as `d(inv(x, y), y) ≥ c d(x, y)` for `y` near `x`,
/// reporting `c` as the constant and `1/c` as the residual against
/// tolerance `1/L4_MIN_CONSTANT`.
///
/// When `method` solves right division on the carrier, `L2(k=…)` reports
/// check distributivity of `underline_inv_k` for `k ∈ UNDERLINE_LEVELS`.
pub fn check_loos_axioms<I: Irq + ?Sized>(
    irq: &I,
    cfg: &LimitConfig,
    sampling: &Sampling,
    tol: f64,
    method: &DivisionMethod,
) -> Result<Vec<AxiomReport>> {
    let inv = |x: &Element, y: &Element| emergent_inverse(irq, x, y, cfg).map(|r| r.0);
    if !irq.is_uniform() {
        return Err(unsupported(irq, "Loos axioms for inv_∞ (carrier is not uniform)"));
    }
    let tol = effective_tol(irq, tol);
    let d = |a: &Element, b: &Element| irq.metric(a, b);
    let triples = sampling.tuples(irq, 3);
    let check = |name: &str, f: &(dyn Fn(&Element, &Element, &Element) -> Result<f64> + Sync)| {
        report_over(name, &triples, tol, |t| settle(f(&t[0], &t[1], &t[2])))
    };
    let mut reports = vec![
        check("L1", &|x, _, _| Ok(d(&inv(x, x)?, x))),
        check("L2", &|x, y, z| {
            let lhs = inv(x, &inv(y, z)?)?;
            let rhs = inv(&inv(x, y)?, &inv(x, z)?)?;
            Ok(d(&lhs, &rhs))
        }),
        check("L3", &|x, y, _| Ok(d(&inv(x, &inv(x, y)?)?, y))),
        l4_audit(irq, cfg, &triples),
    ];
    let b = irq.base_point();
    let divisible = right_divide_k(irq, IterExponent::ONE, &b, &b, method).is_ok();
    if divisible {
        for k in UNDERLINE_LEVELS {
            let k = IterExponent::new(k).expect("nonzero level");
            let uinv = |u: &Element, v: &Element| underline_inv_k(irq, k, u, v, method);
            reports.push(check(&format!("L2(k={k})"), &|x, y, z| {
                let lhs = uinv(x, &uinv(y, z)?)?;
                let rhs = uinv(&uinv(x, y)?, &uinv(x, z)?)?;
                Ok(d(&lhs, &rhs))
            }));
        }
    }
    Ok(reports)
}

/// For each sampled pair `(x, u)`, take `y = x *_m u` with the least
/// `m ≥ 0` putting `y` within `L4_RADIUS` of `x`, and record
/// `d(inv_∞(x, y), y) / d(x, y)`.
fn l4_audit<I: Irq + ?Sized>(irq: &I, cfg: &LimitConfig, triples: &[Vec<Element>]) -> AxiomReport {
    let delta_min = L4_DELTA_FACTOR * L4_RADIUS;
    let ratios: Vec<Option<f64>> = triples
        .iter()
        .map(|t| {
            let (x, mut y) = (&t[0], t[1].clone());
            for _ in 0..200 {
                if irq.metric(x, &y) <= L4_RADIUS {
                    break;
                }
                y = irq.star(x, &y);
            }
            let dxy = irq.metric(x, &y);
            if !(delta_min..=L4_RADIUS).contains(&dxy) {
                return None;
            }
            Some(settle(emergent_inverse(irq, x, &y, cfg).map(|r| irq.metric(&r.0, &y) / dxy)).min(f64::MAX))
        })
        .collect();
    let used: Vec<f64> = ratios.into_iter().flatten().collect();
    let c = used.iter().copied().fold(f64::INFINITY, f64::min);
    let c = if used.is_empty() { 0.0 } else { c };
    let residual = if c > 0.0 { 1.0 / c } else { f64::INFINITY };
    AxiomReport::new("L4", used.len(), residual, 1.0 / L4_MIN_CONSTANT).with_constant(c)
}

/// `d(inv_∞(x, u), inv_∞(x, v)) = d(u, v)`: `inv_∞(x, ·)` is an isometry.
pub fn check_inv_isometry<I: Irq + ?Sized>(
    irq: &I,
    cfg: &LimitConfig,
    sampling: &Sampling,
    tol: f64,
) -> AxiomReport {
    let triples = sampling.tuples(irq, 3);
    report_over("inv-isometry", &triples, tol, |t| {
        let (x, u, v) = (&t[0], &t[1], &t[2]);
        settle((|| {
            let iu = emergent_inverse(irq, x, u, cfg)?.0;
            let iv = emergent_inverse(irq, x, v, cfg)?.0;
            Ok((irq.metric(&iu, &iv) - irq.metric(u, v)).abs())
        })())
    })
}

/// `underline_inv_k(u, v)` is the same point for every `k ∈ UNDERLINE_LEVELS`.
pub fn check_underline_agreement<I: Irq + ?Sized>(
    irq: &I,
    sampling: &Sampling,
    tol: f64,
    method: &DivisionMethod,
) -> AxiomReport {
    let pairs = sampling.tuples(irq, 2);
    report_over("underline-inv-levels", &pairs, tol, |t| {
        let (u, v) = (&t[0], &t[1]);
        settle((|| {
            let at = |k: i64| underline_inv_k(irq, IterExponent::new(k)?, u, v, method);
            let first = at(UNDERLINE_LEVELS[0])?;
            let mut r: f64 = 0.0;
            for &k in &UNDERLINE_LEVELS[1..] {
                r = worst(r, irq.metric(&first, &at(k)?));
            }
            Ok(r)
        })())
    })
}

/// `inv_k(u, w) = inv_∞(u, w *_k u)` for `k ∈ UNDERLINE_LEVELS`. With
/// `v = w *_k u` this is `underline_inv_k(u, v) = inv_∞(u, v)`.
pub fn check_inv_level_identity<I: Irq + ?Sized>(
    irq: &I,
    cfg: &LimitConfig,
    sampling: &Sampling,
    tol: f64,
) -> AxiomReport {
    let pairs = sampling.tuples(irq, 2);
    report_over("6.8", &pairs, tol, |t| {
        let (u, w) = (&t[0], &t[1]);
        settle((|| {
            let mut r: f64 = 0.0;
            for k in UNDERLINE_LEVELS {
                let k = IterExponent::new(k)?;
                let rhs = emergent_inverse(irq, u, &star_k(irq, k, w, u), cfg)?.0;
                r = worst(r, irq.metric(&inv_k(irq, k, u, w), &rhs));
            }
            Ok(r)
        })())
    })
}
