//! Limit operations `k → ∞` of the level-`k` sum, difference and inverse,
//! the tangent groups they define, and the group recovered from a
//! distributive uniform irq.

use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::{effective_tol, max_residual, report_over, tuples, worst, AxiomReport};
use crate::element::Element;
use crate::error::{IrqError, Result};
use crate::irq::{difference_k, inverse_k, sum_k, Irq, IterExponent};
use crate::sampling::Sampling;

/// Stopping rule for limits: stop once `cauchy_window` consecutive distances
/// between successive iterates are at most `tol`, give up after `max_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitConfig {
    pub tol: f64,
    pub max_k: usize,
    pub cauchy_window: usize,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            tol: 1e-12,
            max_k: 200,
            cauchy_window: 3,
        }
    }
}

impl LimitConfig {
    pub fn new(tol: f64, max_k: usize, cauchy_window: usize) -> Result<Self> {
        let cfg = LimitConfig {
            tol,
            max_k,
            cauchy_window,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(IrqError::InvalidParameter(format!(
                "limit tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.cauchy_window == 0 || self.max_k < self.cauchy_window {
            return Err(IrqError::InvalidParameter(format!(
                "need max_k >= cauchy_window >= 1, got max_k={} cauchy_window={}",
                self.max_k, self.cauchy_window
            )));
        }
        if self.max_k as i64 > IterExponent::MAX {
            return Err(IrqError::InvalidParameter(format!(
                "max_k exceeds {}",
                IterExponent::MAX
            )));
        }
        Ok(())
    }
}

/// Record of one limit computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub converged: bool,
    /// Level of the returned iterate.
    pub stop_k: usize,
    /// `d(iterate_k, iterate_{k+1})` for `k = 1, 2, …`.
    pub residual_trail: Vec<f64>,
    /// Geometric mean of the last five ratios of successive residuals.
    pub estimated_rate: f64,
}

const RATE_WINDOW: usize = 5;

/// Geometric mean of the last five ratios `r_{k+1} / r_k`. A ratio with a
/// zero numerator counts as 0; one with a zero denominator is skipped.
pub fn estimate_rate(trail: &[f64]) -> f64 {
    let ratios: Vec<f64> = trail
        .windows(2)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .collect();
    let tail = &ratios[ratios.len().saturating_sub(RATE_WINDOW)..];
    if tail.is_empty() {
        return 0.0;
    }
    if tail.iter().any(|&r| r == 0.0) {
        return 0.0;
    }
    (tail.iter().map(|r| r.ln()).sum::<f64>() / tail.len() as f64).exp()
}

/// Iterate `level ↦ value(level)` from `k = 1` under the Cauchy rule of `cfg`.
pub fn limit<F>(
    metric: impl Fn(&Element, &Element) -> f64,
    name: &str,
    cfg: &LimitConfig,
    value: F,
) -> Result<(Element, ConvergenceReport)>
where
    F: Fn(IterExponent) -> Element,
{
    cfg.validate()?;
    let level = |k: usize| IterExponent::new(k as i64).expect("k within bounds");
    let mut prev = value(level(1));
    let mut trail = Vec::new();
    let mut streak = 0;
    for k in 2..=cfg.max_k {
        let next = value(level(k));
        let r = metric(&prev, &next);
        trail.push(r);
        prev = next;
        streak = if r <= cfg.tol { streak + 1 } else { 0 };
        if streak >= cfg.cauchy_window {
            let estimated_rate = estimate_rate(&trail);
            let report = ConvergenceReport {
                converged: true,
                stop_k: k,
                residual_trail: trail,
                estimated_rate,
            };
            return Ok((prev, report));
        }
    }
    let estimated_rate = estimate_rate(&trail);
    Err(IrqError::NonConvergence {
        name: name.to_string(),
        report: ConvergenceReport {
            converged: false,
            stop_k: cfg.max_k,
            residual_trail: trail,
            estimated_rate,
        },
    })
}

fn require_uniform<I: Irq + ?Sized>(irq: &I, what: &str) -> Result<()> {
    if irq.is_uniform() {
        Ok(())
    } else {
        Err(IrqError::Unsupported {
            carrier: irq.name(),
            what: format!("{what} (carrier is not uniform)"),
        })
    }
}

/// `u +^x_∞ v = lim u +^x_k v`.
pub fn emergent_sum<I: Irq + ?Sized>(
    irq: &I,
    x: &Element,
    u: &Element,
    v: &Element,
    cfg: &LimitConfig,
) -> Result<(Element, ConvergenceReport)> {
    require_uniform(irq, "emergent sum")?;
    limit(|a, b| irq.metric(a, b), "sum", cfg, |k| sum_k(irq, k, x, u, v))
}

/// `v -^x_∞ u = lim v -^x_k u`.
pub fn emergent_difference<I: Irq + ?Sized>(
    irq: &I,
    x: &Element,
    u: &Element,
    v: &Element,
    cfg: &LimitConfig,
) -> Result<(Element, ConvergenceReport)> {
    require_uniform(irq, "emergent difference")?;
    limit(|a, b| irq.metric(a, b), "difference", cfg, |k| {
        difference_k(irq, k, x, u, v)
    })
}

/// `inv_∞(x, u) = lim (x *_k u) \_k x`.
pub fn emergent_inverse<I: Irq + ?Sized>(
    irq: &I,
    x: &Element,
    u: &Element,
    cfg: &LimitConfig,
) -> Result<(Element, ConvergenceReport)> {
    require_uniform(irq, "emergent inverse")?;
    limit(|a, b| irq.metric(a, b), "inverse", cfg, |k| inverse_k(irq, k, x, u))
}

/// The contractible group `(X, +^x_∞)` at a basepoint `x`, with
/// contraction `u ↦ x * u`.
#[derive(Clone)]
pub struct TangentGroup<'a, I: ?Sized> {
    irq: &'a I,
    x: Element,
    cfg: LimitConfig,
}

pub fn tangent_group<'a, I: Irq + ?Sized>(
    irq: &'a I,
    x: &Element,
    cfg: &LimitConfig,
) -> Result<TangentGroup<'a, I>> {
    require_uniform(irq, "tangent group")?;
    cfg.validate()?;
    Ok(TangentGroup {
        irq,
        x: x.clone(),
        cfg: *cfg,
    })
}

impl<'a, I: Irq + ?Sized> TangentGroup<'a, I> {
    pub fn basepoint(&self) -> &Element {
        &self.x
    }

    pub fn product(&self, u: &Element, v: &Element) -> Result<Element> {
        emergent_sum(self.irq, &self.x, u, v, &self.cfg).map(|r| r.0)
    }

    pub fn inverse(&self, u: &Element) -> Result<Element> {
        emergent_inverse(self.irq, &self.x, u, &self.cfg).map(|r| r.0)
    }

    /// `v -^x_∞ u`.
    pub fn difference(&self, u: &Element, v: &Element) -> Result<Element> {
        emergent_difference(self.irq, &self.x, u, v, &self.cfg).map(|r| r.0)
    }

    pub fn contraction(&self, u: &Element) -> Element {
        self.irq.star(&self.x, u)
    }
}

/// Residual of a fallible check; a failed limit counts as infinite.
pub(crate) fn settle(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

/// Check the group laws of the tangent group at `x` on sampled triples:
/// relations (a)–(g) in the limit, right neutrality, the inverse laws and
/// that `u ↦ x * u` is an automorphism.
pub fn verify_tangent_group<I: Irq + ?Sized>(
    irq: &I,
    x: &Element,
    cfg: &LimitConfig,
    sampling: &Sampling,
    tol: f64,
) -> Result<Vec<AxiomReport>> {
    let g = tangent_group(irq, x, cfg)?;
    let tol = effective_tol(irq, tol);
    let d = |a: &Element, b: &Element| irq.metric(a, b);
    let triples = sampling.tuples(irq, 3);
    let check = |name: &str, f: &(dyn Fn(&Element, &Element, &Element) -> Result<f64> + Sync)| {
        report_over(name, &triples, tol, |t| settle(f(&t[0], &t[1], &t[2])))
    };
    Ok(vec![
        check("5.2a", &|u, v, _| {
            let s = g.product(u, v)?;
            Ok(d(&g.difference(u, &s)?, v))
        }),
        check("5.2b", &|u, v, _| {
            let diff = g.difference(u, v)?;
            Ok(d(&g.product(u, &diff)?, v))
        }),
        check("5.2c", &|u, v, _| {
            let lhs = g.difference(u, v)?;
            let rhs = g.product(&g.inverse(u)?, v)?;
            Ok(d(&lhs, &rhs))
        }),
        check("5.2d", &|u, _, _| Ok(d(&g.inverse(&g.inverse(u)?)?, u))),
        check("5.2e", &|u, v, w| {
            let lhs = g.product(u, &g.product(v, w)?)?;
            let rhs = g.product(&g.product(u, v)?, w)?;
            Ok(d(&lhs, &rhs))
        }),
        check("5.2f", &|u, _, _| Ok(d(&g.inverse(u)?, &g.difference(u, x)?))),
        check("5.2g", &|u, _, _| Ok(d(&g.product(x, u)?, u))),
        check("5.2g-right", &|u, _, _| Ok(d(&g.product(u, x)?, u))),
        check("5.2-inverse", &|u, _, _| {
            let inv = g.inverse(u)?;
            Ok(worst(d(&g.product(u, &inv)?, x), d(&g.product(&inv, u)?, x)))
        }),
        check("alpha-automorphism", &|u, v, _| {
            let lhs = g.contraction(&g.product(u, v)?);
            let rhs = g.product(&g.contraction(u), &g.contraction(v))?;
            Ok(d(&lhs, &rhs))
        }),
    ])
}

/// Self-distributivity `x * (y * z) = (x * y) * (x * z)` together with
/// `x * (y \ z) = (x * y) \ (x * z)` and `x \ (y * z) = (x \ y) * (x \ z)`,
/// as one report named `6.1`. Small finite carriers are checked on all triples.
pub fn check_distributive<I: Irq + ?Sized>(irq: &I, sampling: &Sampling, tol: f64) -> AxiomReport {
    let tol = effective_tol(irq, tol);
    let triples = tuples(irq, sampling, 3);
    report_over("6.1", &triples, tol, |t| {
        let (x, y, z) = (&t[0], &t[1], &t[2]);
        let (s, b) = (|a: &Element, c: &Element| irq.star(a, c), |a: &Element, c: &Element| irq.back(a, c));
        let r1 = irq.metric(&s(x, &s(y, z)), &s(&s(x, y), &s(x, z)));
        let r2 = irq.metric(&s(x, &b(y, z)), &b(&s(x, y), &s(x, z)));
        let r3 = irq.metric(&b(x, &s(y, z)), &s(&b(x, y), &b(x, z)));
        worst(r1, worst(r2, r3))
    })
}

/// Group recovered from a distributive uniform irq with chosen neutral
/// element `e`: `xy = x +^e_∞ y`, `x⁻¹ = inv_∞(e, x)`.
#[derive(Clone)]
pub struct ReconstructedGroup<'a, I: ?Sized> {
    tangent: TangentGroup<'a, I>,
}

impl<'a, I: Irq + ?Sized> ReconstructedGroup<'a, I> {
    pub fn neutral(&self) -> &Element {
        self.tangent.basepoint()
    }

    pub fn product(&self, x: &Element, y: &Element) -> Result<Element> {
        self.tangent.product(x, y)
    }

    pub fn inverse(&self, x: &Element) -> Result<Element> {
        self.tangent.inverse(x)
    }

    /// `x (e * (x⁻¹ y))`, which must agree with `x * y`.
    pub fn derived_star(&self, x: &Element, y: &Element) -> Result<Element> {
        let rel = self.product(&self.inverse(x)?, y)?;
        self.product(x, &self.tangent.contraction(&rel))
    }
}

/// Samples on which distributivity is checked before reconstruction.
pub const RECONSTRUCT_SAMPLING: Sampling = Sampling {
    seed: 0x6_1,
    count: 64,
    radius: 1.0,
};

/// Tolerance of that check.
pub const RECONSTRUCT_TOL: f64 = 1e-9;

/// Reconstruct the group of a distributive uniform irq, rejecting carriers
/// that fail [`check_distributive`] on [`RECONSTRUCT_SAMPLING`].
pub fn reconstruct_group<'a, I: Irq + ?Sized>(
    irq: &'a I,
    e: &Element,
    cfg: &LimitConfig,
) -> Result<ReconstructedGroup<'a, I>> {
    reconstruct_group_with(irq, e, cfg, &RECONSTRUCT_SAMPLING, RECONSTRUCT_TOL)
}

pub fn reconstruct_group_with<'a, I: Irq + ?Sized>(
    irq: &'a I,
    e: &Element,
    cfg: &LimitConfig,
    sampling: &Sampling,
    tol: f64,
) -> Result<ReconstructedGroup<'a, I>> {
    require_uniform(irq, "group reconstruction")?;
    let report = check_distributive(irq, sampling, tol);
    if !report.passed {
        return Err(IrqError::NotDistributive {
            residual: report.max_residual,
            tol: report.tolerance,
        });
    }
    Ok(ReconstructedGroup {
        tangent: tangent_group(irq, e, cfg)?,
    })
}

/// Check a reconstructed group on sampled triples:
/// `6.1(i)` associativity of the product,
/// `6.1(ii)` `(xyz)_∞ = x y⁻¹ z`,
/// `6.1(iii)` `x * y = x (e * (x⁻¹ y))`,
/// `6.2` `)xyz(_∞ = (yxz)_∞`,
/// and, when the carrier is a group with a morphism `δ`, `6.1-group` that
/// the product is the original group law.
pub fn verify_reconstruction<I: Irq + ?Sized>(
    irq: &I,
    group: &ReconstructedGroup<'_, I>,
    cfg: &LimitConfig,
    sampling: &Sampling,
    tol: f64,
) -> Vec<AxiomReport> {
    let tol = effective_tol(irq, tol);
    let d = |a: &Element, b: &Element| irq.metric(a, b);
    let triples = sampling.tuples(irq, 3);
    let check = |name: &str, f: &(dyn Fn(&Element, &Element, &Element) -> Result<f64> + Sync)| {
        report_over(name, &triples, tol, |t| settle(f(&t[0], &t[1], &t[2])))
    };
    let mut reports = vec![
        check("6.1(i)", &|x, y, z| {
            let lhs = group.product(x, &group.product(y, z)?)?;
            let rhs = group.product(&group.product(x, y)?, z)?;
            Ok(d(&lhs, &rhs))
        }),
        check("6.1(ii)", &|x, y, z| {
            let (diff, _) = emergent_difference(irq, x, y, z, cfg)?;
            let rhs = group.product(x, &group.product(&group.inverse(y)?, z)?)?;
            Ok(d(&diff, &rhs))
        }),
        check("6.1(iii)", &|x, y, _| Ok(d(&group.derived_star(x, y)?, &irq.star(x, y)))),
        check("6.2", &|x, y, z| {
            let (s, _) = emergent_sum(irq, x, y, z, cfg)?;
            let (diff, _) = emergent_difference(irq, y, x, z, cfg)?;
            Ok(d(&s, &diff))
        }),
    ];
    if let Some(gs) = irq.group_structure().filter(|g| g.delta_is_morphism()) {
        reports.push(check("6.1-group", &|x, y, _| {
            Ok(d(&group.product(x, y)?, &gs.product(x, y)))
        }));
    }
    reports
}

/// Spread of stopping levels of one limit over a sample of triples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformityReport {
    pub name: String,
    pub samples: usize,
    pub converged: usize,
    pub min_stop_k: usize,
    pub max_stop_k: usize,
    /// Largest estimated rate over the converged samples.
    pub max_rate: f64,
}

impl UniformityReport {
    /// Every sample converged, so a common bound on `stop_k` exists.
    pub fn uniform(&self) -> bool {
        self.converged == self.samples
    }
}

/// Run the sum, difference and inverse limits over sampled triples and
/// record the common bound on the stopping level.
pub fn audit_uniformity<I: Irq + ?Sized>(
    irq: &I,
    cfg: &LimitConfig,
    sampling: &Sampling,
) -> Result<Vec<UniformityReport>> {
    require_uniform(irq, "uniformity audit")?;
    let triples = sampling.tuples(irq, 3);
    type Lim<'f> = dyn Fn(&[Element]) -> Result<(Element, ConvergenceReport)> + Sync + 'f;
    let limits: [(&str, &Lim); 3] = [
        ("sum", &|t| emergent_sum(irq, &t[0], &t[1], &t[2], cfg)),
        ("difference", &|t| emergent_difference(irq, &t[0], &t[1], &t[2], cfg)),
        ("inverse", &|t| emergent_inverse(irq, &t[0], &t[1], cfg)),
    ];
    Ok(limits
        .iter()
        .map(|(name, f)| {
            let runs: Vec<Option<ConvergenceReport>> =
                triples.par_iter().map(|t| f(t).ok().map(|r| r.1)).collect();
            let ok: Vec<&ConvergenceReport> = runs.iter().flatten().collect();
            UniformityReport {
                name: name.to_string(),
                samples: triples.len(),
                converged: ok.len(),
                min_stop_k: ok.iter().map(|r| r.stop_k).min().unwrap_or(0),
                max_stop_k: ok.iter().map(|r| r.stop_k).max().unwrap_or(0),
                max_rate: ok.iter().map(|r| r.estimated_rate).fold(0.0, f64::max),
            }
        })
        .collect())
}

/// Largest distance between a limit and an oracle over sampled triples.
pub fn max_limit_error<I, F, G>(irq: &I, sampling: &Sampling, limit: F, oracle: G) -> f64
where
    I: Irq + ?Sized,
    F: Fn(&[Element]) -> Result<Element> + Sync,
    G: Fn(&[Element]) -> Element + Sync,
{
    let triples = sampling.tuples(irq, 3);
    max_residual(&triples, |t| settle(limit(t).map(|v| irq.metric(&v, &oracle(t)))))
}
