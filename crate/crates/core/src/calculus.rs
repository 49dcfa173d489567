//! Derivatives of maps between uniform irqs.
//!
//! `Tf(x, u) = lim f(x) \_k f(x *_k u)`, evaluated in the target.
//! Non-convergence is reported, never treated as proof of anything.

use crate::axioms::{report_over, AxiomReport};
use crate::element::Element;
use crate::emergent::{emergent_sum, limit, settle, ConvergenceReport, LimitConfig};
use crate::error::{IrqError, Result};
use crate::irq::{back_k, star_k, Irq};
use crate::sampling::Sampling;

type PointMap<'a> = dyn Fn(&Element) -> Element + Send + Sync + 'a;

/// A function `f : X → Y` between two irqs.
pub struct MapBetweenCarriers<'a> {
    source: &'a dyn Irq,
    target: &'a dyn Irq,
    f: Box<PointMap<'a>>,
}

impl<'a> MapBetweenCarriers<'a> {
    /// Checks that `f` sends the source base point into the target carrier.
    pub fn new(
        source: &'a dyn Irq,
        target: &'a dyn Irq,
        f: impl Fn(&Element) -> Element + Send + Sync + 'a,
    ) -> Result<Self> {
        let image = f(&source.base_point());
        if !target.contains(&image) {
            return Err(IrqError::NotInCarrier {
                carrier: target.name(),
                detail: format!("f maps the base point of {} to {image:?}", source.name()),
            });
        }
        Ok(MapBetweenCarriers {
            source,
            target,
            f: Box::new(f),
        })
    }

    pub fn source(&self) -> &dyn Irq {
        self.source
    }

    pub fn target(&self) -> &dyn Irq {
        self.target
    }

    pub fn apply(&self, x: &Element) -> Element {
        (self.f)(x)
    }
}

fn require_uniform(irq: &dyn Irq) -> Result<()> {
    if irq.is_uniform() {
        Ok(())
    } else {
        Err(IrqError::Unsupported {
            carrier: irq.name(),
            what: "derivative (carrier is not uniform)".to_string(),
        })
    }
}

/// `Tf(x, u)`, the stabilized value of `f(x) \_k f(x *_k u)`.
pub fn derivative(
    map: &MapBetweenCarriers<'_>,
    x: &Element,
    u: &Element,
    cfg: &LimitConfig,
) -> Result<(Element, ConvergenceReport)> {
    require_uniform(map.source)?;
    require_uniform(map.target)?;
    let fx = map.apply(x);
    let target = map.target;
    limit(|a, b| target.metric(a, b), "derivative", cfg, |k| {
        let moved = map.apply(&star_k(map.source, k, x, u));
        back_k(target, k, &fx, &moved)
    })
}

/// `Tf(x, u +^x v) = Tf(x, u) +^{f(x)} Tf(x, v)` on sampled pairs, with
/// both sums taken in the limit.
pub fn check_derivative_morphism(
    map: &MapBetweenCarriers<'_>,
    x: &Element,
    cfg: &LimitConfig,
    sampling: &Sampling,
    tol: f64,
) -> AxiomReport {
    let pairs = sampling.tuples(map.source, 2);
    let fx = map.apply(x);
    let tf = |u: &Element| derivative(map, x, u, cfg).map(|r| r.0);
    report_over("5.2-derivative-morphism", &pairs, tol, |t| {
        let (u, v) = (&t[0], &t[1]);
        settle((|| {
            let uv = emergent_sum(map.source, x, u, v, cfg)?.0;
            let lhs = tf(&uv)?;
            let rhs = emergent_sum(map.target, &fx, &tf(u)?, &tf(v)?, cfg)?.0;
            Ok(map.target.metric(&lhs, &rhs))
        })())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carriers::{make_dihedral_quandle, make_euclidean, make_heisenberg, GroupStructure};

    #[test]
    fn identity_has_derivative_u() {
        let e = make_euclidean(2, 0.5).unwrap();
        let m = MapBetweenCarriers::new(&e, &e, |p| p.clone()).unwrap();
        let (x, u) = (Element::point(&[1.0, 2.0]), Element::point(&[-3.0, 0.5]));
        let (tf, rep) = derivative(&m, &x, &u, &LimitConfig::default()).unwrap();
        assert!(rep.converged);
        assert!(e.metric(&tf, &u) < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = make_euclidean(2, 0.5).unwrap();
        let b = make_euclidean(3, 0.5).unwrap();
        assert!(matches!(
            MapBetweenCarriers::new(&a, &b, |p| p.clone()),
            Err(IrqError::NotInCarrier { .. })
        ));
    }

    #[test]
    fn finite_carriers_have_no_derivative() {
        let q = make_dihedral_quandle(5).unwrap();
        let m = MapBetweenCarriers::new(&q, &q, |p| p.clone()).unwrap();
        let l = Element::Label(1);
        assert!(derivative(&m, &l, &l, &LimitConfig::default()).is_err());
    }

    #[test]
    fn dilation_on_heisenberg_is_its_own_derivative_at_e() {
        let h = make_heisenberg(0.5).unwrap();
        let half = make_heisenberg(0.5).unwrap();
        let m = MapBetweenCarriers::new(&h, &h, move |p| half.delta(p)).unwrap();
        let e = h.identity();
        let u = Element::point(&[0.7, -1.1, 0.4]);
        let (tf, _) = derivative(&m, &e, &u, &LimitConfig::default()).unwrap();
        assert!(h.metric(&tf, &h.delta(&u)) < 1e-10);
    }
}
