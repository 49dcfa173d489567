//! The experiments behind `emergent-irq run`.

use anyhow::{bail, Result};
use rayon::prelude::*;

use emergent_irq::calculus::{check_derivative_morphism, derivative, MapBetweenCarriers};
use emergent_irq::carriers::{
    make_carnot, make_dihedral_quandle, make_engel, make_euclidean, make_heisenberg,
    make_hyperbolic, make_sine_shear, GroupMetric,
};
use emergent_irq::division::{
    check_inv_isometry, check_inv_level_identity, check_loos_axioms, check_t_involution,
    check_underline_agreement, loop_isotope_k, right_divide_k, DivisionMethod,
};
use emergent_irq::emergent::{
    check_distributive, emergent_difference, emergent_inverse, emergent_sum,
    reconstruct_group_with, verify_reconstruction, ConvergenceReport,
};
use emergent_irq::{star_k, Element, Irq, IrqError, IterExponent, Sampling};

use crate::config::{CarrierKind, CarrierSpec, Experiment, MapChoice, MetricChoice, Plan};
use crate::report::{sort_rows, Row};

/// Levels at which division and the loop laws are checked.
pub const DIVIDE_LEVELS: [i64; 4] = [-1, 1, 2, 3];

/// Level at which the loop isotope is compared with the emergent sum, on
/// group carriers.
pub const LOOP_LIMIT_LEVEL: i64 = 30;

/// Tolerance of that comparison. The gap shrinks like `εᵏ`, so it is not
/// tied to the configured `tol`.
pub const LOOP_LIMIT_TOL: f64 = 1e-6;

pub fn build_carrier(spec: &CarrierSpec, metric: MetricChoice) -> Result<Box<dyn Irq>> {
    let m = match metric {
        MetricChoice::Coordinate => GroupMetric::Coordinate,
        MetricChoice::Homogeneous => GroupMetric::Homogeneous,
    };
    Ok(match spec {
        CarrierSpec::Euclidean { dim, epsilon } => Box::new(make_euclidean(*dim, *epsilon)?.with_metric(m)),
        CarrierSpec::Heisenberg { epsilon } => Box::new(make_heisenberg(*epsilon)?.with_metric(m)),
        CarrierSpec::Engel { epsilon } => Box::new(make_engel(*epsilon)?.with_metric(m)),
        CarrierSpec::Carnot { algebra, epsilon } => {
            Box::new(make_carnot(algebra.clone(), *epsilon)?.with_metric(m))
        }
        CarrierSpec::Dihedral { n } => Box::new(make_dihedral_quandle(*n)?),
        CarrierSpec::Hyperbolic { epsilon } => Box::new(make_hyperbolic(*epsilon)?),
        CarrierSpec::SineShear { epsilon, eta } => Box::new(make_sine_shear(*epsilon, *eta)?.with_metric(m)),
    })
}

/// Run the planned experiment and return its rows in report order.
///
/// Invalid carrier/experiment pairings are errors. Failed limits and
/// divisions are failing rows.
pub fn run(plan: &Plan) -> Result<Vec<Row>> {
    let irq = build_carrier(&plan.carrier, plan.metric)?;
    let irq = irq.as_ref();
    let ctx = Ctx {
        plan,
        irq,
        label: plan.carrier.label(),
        sampling: Sampling::new(plan.seed, plan.samples, plan.radius),
    };
    if plan.experiment != Experiment::Axioms
        && plan.experiment != Experiment::Reconstruct
        && plan.experiment != Experiment::Symmetric
        && !irq.is_uniform()
    {
        bail!(
            "experiment {} needs a uniform carrier; {} is not",
            plan.experiment.name(),
            plan.carrier.kind().name()
        );
    }
    let mut rows = match plan.experiment {
        Experiment::Axioms => ctx.axioms(),
        Experiment::Converge => ctx.converge(),
        Experiment::Reconstruct => ctx.reconstruct(),
        Experiment::Symmetric => ctx.symmetric()?,
        Experiment::Derivative => ctx.derivative()?,
        Experiment::Divide => ctx.divide()?,
    };
    sort_rows(&mut rows);
    Ok(rows)
}

struct Ctx<'a> {
    plan: &'a Plan,
    irq: &'a dyn Irq,
    label: String,
    sampling: Sampling,
}

/// Largest residual, NaN counting as infinite.
fn worst(rs: impl IntoIterator<Item = f64>) -> f64 {
    rs.into_iter()
        .map(|r| if r.is_nan() { f64::INFINITY } else { r })
        .fold(0.0, f64::max)
}

fn level(k: i64) -> IterExponent {
    IterExponent::new(k).expect("levels used here are nonzero")
}

impl Ctx<'_> {
    fn row(&self, identity: &str, k: Option<i64>, samples: usize, max_residual: f64, tol: f64) -> Row {
        Row {
            experiment: self.plan.experiment.name().to_string(),
            carrier: self.label.clone(),
            identity: identity.to_string(),
            k,
            samples,
            max_residual,
            rate: None,
            passed: max_residual <= tol,
        }
    }

    fn report_rows<'r>(&self, reports: impl IntoIterator<Item = &'r emergent_irq::AxiomReport>) -> Vec<Row> {
        reports
            .into_iter()
            .map(|r| Row::from_report(self.plan.experiment.name(), &self.label, r))
            .collect()
    }

    /// Row for a batch of limit computations. Each converged sample carries
    /// its residual (distance to an oracle, or the last Cauchy step).
    fn limit_row(&self, identity: &str, runs: &[Option<(f64, ConvergenceReport)>]) -> Row {
        let ok: Vec<&(f64, ConvergenceReport)> = runs.iter().flatten().collect();
        let all = ok.len() == runs.len();
        let residual = if all { worst(ok.iter().map(|r| r.0)) } else { f64::INFINITY };
        let mut row = self.row(identity, None, runs.len(), residual, self.plan.tol);
        row.k = ok.iter().map(|r| r.1.stop_k as i64).max();
        if !ok.is_empty() {
            row.rate = Some(ok.iter().map(|r| r.1.estimated_rate).sum::<f64>() / ok.len() as f64);
        }
        row
    }

    fn axioms(&self) -> Vec<Row> {
        let p = self.plan;
        let reports = emergent_irq::check_irq_axioms(self.irq, p.seed, p.samples, p.radius, p.tol);
        self.report_rows(&reports)
    }

    fn converge(&self) -> Vec<Row> {
        let (irq, cfg) = (self.irq, &self.plan.limit);
        let triples = self.sampling.tuples(irq, 3);
        let group = irq.group_structure().filter(|g| g.delta_is_morphism());
        type Lim<'f> = dyn Fn(&[Element]) -> emergent_irq::Result<(Element, ConvergenceReport)> + Sync + 'f;
        type Oracle<'f> = dyn Fn(&[Element]) -> Option<Element> + Sync + 'f;
        let sum: (&str, &Lim, &Oracle) = (
            "sum",
            &|t| emergent_sum(irq, &t[0], &t[1], &t[2], cfg),
            &|t| group.map(|g| g.product(&g.product(&t[1], &g.inverse(&t[0])), &t[2])),
        );
        let difference: (&str, &Lim, &Oracle) = (
            "difference",
            &|t| emergent_difference(irq, &t[0], &t[1], &t[2], cfg),
            &|t| group.map(|g| g.product(&g.product(&t[0], &g.inverse(&t[1])), &t[2])),
        );
        let inverse: (&str, &Lim, &Oracle) = (
            "inverse",
            &|t| emergent_inverse(irq, &t[0], &t[1], cfg),
            &|t| group.map(|g| g.product(&g.product(&t[0], &g.inverse(&t[1])), &t[0])),
        );
        [sum, difference, inverse]
            .iter()
            .map(|(name, lim, oracle)| {
                let runs: Vec<_> = triples
                    .par_iter()
                    .map(|t| {
                        let (value, report) = lim(t).ok()?;
                        let err = match oracle(t) {
                            Some(o) => irq.metric(&value, &o),
                            None => report.residual_trail.last().copied().unwrap_or(0.0),
                        };
                        Some((err, report))
                    })
                    .collect();
                self.limit_row(name, &runs)
            })
            .collect()
    }

    fn reconstruct(&self) -> Vec<Row> {
        let (irq, p) = (self.irq, self.plan);
        let distributive = check_distributive(irq, &self.sampling, p.tol);
        let mut rows = self.report_rows([&distributive]);
        if distributive.passed && irq.is_uniform() {
            let e = irq.base_point();
            match reconstruct_group_with(irq, &e, &p.limit, &self.sampling, p.tol) {
                Ok(g) => rows.extend(self.report_rows(&verify_reconstruction(irq, &g, &p.limit, &self.sampling, p.tol))),
                Err(_) => rows.push(self.row("6.1-group-reconstruction", None, p.samples, f64::INFINITY, p.tol)),
            }
        }
        rows
    }

    fn symmetric(&self) -> Result<Vec<Row>> {
        let (irq, p) = (self.irq, self.plan);
        let mut reports = vec![check_t_involution(irq, &self.sampling, p.tol)];
        if irq.is_uniform() {
            let method = DivisionMethod::best_for(irq);
            reports.extend(check_loos_axioms(irq, &p.limit, &self.sampling, p.tol, &method)?);
            if matches!(p.carrier.kind(), CarrierKind::Hyperbolic | CarrierKind::Euclidean) {
                reports.push(check_inv_isometry(irq, &p.limit, &self.sampling, p.tol));
                reports.push(check_underline_agreement(irq, &self.sampling, p.tol, &method));
                reports.push(check_inv_level_identity(irq, &p.limit, &self.sampling, p.tol));
            }
        }
        Ok(self.report_rows(&reports))
    }

    fn derivative(&self) -> Result<Vec<Row>> {
        let (irq, p) = (self.irq, self.plan);
        let base = irq.base_point();
        let map = match p.map {
            MapChoice::Identity => MapBetweenCarriers::new(irq, irq, |x: &Element| x.clone())?,
            MapChoice::Dilation => {
                let Some(g) = irq.group_structure() else {
                    bail!("map \"dilation\" needs a group carrier");
                };
                MapBetweenCarriers::new(irq, irq, move |x: &Element| g.delta(x))?
            }
            MapChoice::Star => {
                let b = base.clone();
                MapBetweenCarriers::new(irq, irq, move |u: &Element| irq.star(&b, u))?
            }
        };
        let pairs = self.sampling.tuples(irq, 2);
        let runs: Vec<_> = pairs
            .par_iter()
            .map(|t| {
                let (_, report) = derivative(&map, &t[0], &t[1], &p.limit).ok()?;
                Some((report.residual_trail.last().copied().unwrap_or(0.0), report))
            })
            .collect();
        let mut rows = vec![self.limit_row("5.2-derivative", &runs)];
        let morphism = check_derivative_morphism(&map, &base, &p.limit, &self.sampling, p.tol);
        rows.extend(self.report_rows([&morphism]));
        Ok(rows)
    }

    fn divide(&self) -> Result<Vec<Row>> {
        let (irq, p) = (self.irq, self.plan);
        let method = DivisionMethod::best_for(irq);
        let b = irq.base_point();
        if let Err(e @ IrqError::Unsupported { .. }) = right_divide_k(irq, IterExponent::ONE, &b, &b, &method) {
            bail!("experiment divide: {e}");
        }
        let pairs = self.sampling.tuples(irq, 2);
        let mut rows = Vec::new();
        for k in DIVIDE_LEVELS {
            let lk = level(k);
            let quasigroup: Vec<f64> = pairs
                .par_iter()
                .map(|t| match right_divide_k(irq, lk, &t[0], &t[1], &method) {
                    Ok(y) => irq.metric(&star_k(irq, lk, &y.value, &t[1]), &t[0]),
                    Err(_) => f64::INFINITY,
                })
                .collect();
            rows.push(self.row("quasigroup", Some(k), pairs.len(), worst(quasigroup), method.tol));
            let loops: Vec<f64> = pairs
                .par_iter()
                .map(|t| {
                    let (x, u) = (&t[0], &t[1]);
                    let left = loop_isotope_k(irq, lk, x, x, u, &method).map(|v| irq.metric(&v, u));
                    let right = loop_isotope_k(irq, lk, x, u, x, &method).map(|v| irq.metric(&v, u));
                    worst([left.unwrap_or(f64::INFINITY), right.unwrap_or(f64::INFINITY)])
                })
                .collect();
            rows.push(self.row("6.3-loop", Some(k), pairs.len(), worst(loops), p.tol));
        }
        if irq.group_structure().is_none() {
            return Ok(rows);
        }
        let triples = self.sampling.tuples(irq, 3);
        let lk = level(LOOP_LIMIT_LEVEL);
        let gaps: Vec<f64> = triples
            .par_iter()
            .map(|t| {
                let (x, u, v) = (&t[0], &t[1], &t[2]);
                let o = loop_isotope_k(irq, lk, x, u, v, &method);
                let s = emergent_sum(irq, x, u, v, &p.limit);
                match (o, s) {
                    (Ok(o), Ok((s, _))) => irq.metric(&o, &s),
                    _ => f64::INFINITY,
                }
            })
            .collect();
        rows.push(self.row("6.3-limit", Some(LOOP_LIMIT_LEVEL), triples.len(), worst(gaps), LOOP_LIMIT_TOL));
        Ok(rows)
    }
}
