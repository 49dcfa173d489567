//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! Exits nonzero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use emergent_irq::calculus::{check_derivative_morphism, derivative, MapBetweenCarriers};
use emergent_irq::carriers::{
    make_dihedral_quandle, make_engel, make_euclidean, make_heisenberg, make_hyperbolic,
    make_sine_shear, GroupMetric, GroupStructure,
};
use emergent_irq::division::{
    check_inv_isometry, check_loos_axioms, check_t_involution, check_underline_agreement,
    loop_isotope_k, right_divide_k, underline_inv_k, DivisionMethod,
};
use emergent_irq::emergent::{
    check_distributive, emergent_difference, emergent_sum, reconstruct_group,
    verify_reconstruction, verify_tangent_group, LimitConfig,
};
use emergent_irq::{check_irq_axioms, sum_k, AxiomReport, Element, Irq, IterExponent, Sampling};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

/// Collects named sub-checks; the criterion passes when all do.
#[derive(Default)]
struct Tally {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, name: &str, value: f64, ok: bool) {
        self.notes.push(format!("{name}={value:.2e}"));
        if !ok {
            self.failures.push(format!("{name}={value:e}"));
        }
    }

    fn reports(&mut self, what: &str, reports: &[AxiomReport]) {
        let worst = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
        self.notes.push(format!("{what} max={worst:.2e}"));
        for r in reports.iter().filter(|r| !r.passed) {
            self.failures.push(format!("{what}:{}={:e}", r.name, r.max_residual));
        }
    }

    fn finish(self) -> Outcome {
        if self.failures.is_empty() {
            Outcome::new(true, self.notes.join("; "))
        } else {
            Outcome::new(false, format!("failed: {}", self.failures.join(", ")))
        }
    }
}

fn k(n: i64) -> IterExponent {
    IterExponent::new(n).unwrap()
}

fn worst(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().map(|r| if r.is_nan() { f64::INFINITY } else { r }).fold(0.0, f64::max)
}

/// Irq axiom suite on exact and sampled carriers.
fn criterion_1() -> Outcome {
    let mut t = Tally::default();
    for n in [5, 7, 9] {
        let d = make_dihedral_quandle(n).unwrap();
        let reports = check_irq_axioms(&d, 0, 1, 1.0, 0.0);
        let r = worst(reports.iter().map(|r| r.max_residual));
        t.check(&format!("dihedral{n}"), r, r == 0.0 && reports.iter().all(|r| r.passed));
    }
    let tol = 1e-9;
    let mut sampled: Vec<(String, Box<dyn Irq>)> = Vec::new();
    for dim in [1, 3] {
        for eps in [0.3, 0.5] {
            let e = make_euclidean(dim, eps).unwrap().with_metric(GroupMetric::Homogeneous);
            sampled.push((format!("R{dim}(eps={eps})"), Box::new(e)));
        }
    }
    sampled.push(("heisenberg".into(), Box::new(make_heisenberg(0.5).unwrap().with_metric(GroupMetric::Homogeneous))));
    sampled.push(("engel".into(), Box::new(make_engel(0.5).unwrap().with_metric(GroupMetric::Homogeneous))));
    for (name, irq) in &sampled {
        t.reports(name, &check_irq_axioms(irq.as_ref(), 101, 1000, 2.0, tol));
    }
    t.finish()
}

/// Emergent limits against the group formulas.
fn criterion_2() -> Outcome {
    let mut t = Tally::default();
    let h = make_heisenberg(0.5).unwrap();
    let cfg = LimitConfig::default();
    let triples = Sampling::new(202, 100, 2.0).tuples(&h, 3);
    // u x⁻¹ v in the Heisenberg law, written out independently of the library.
    let oracle = |x: &[f64], u: &[f64], v: &[f64]| {
        let mul = |a: &[f64], b: &[f64]| vec![a[0] + b[0], a[1] + b[1], a[2] + b[2] + (a[0] * b[1] - b[0] * a[1]) / 2.0];
        let xinv: Vec<f64> = x.iter().map(|c| -c).collect();
        mul(&mul(u, &xinv), v)
    };
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
    let at30 = worst(triples.iter().map(|tr| {
        let s = sum_k(&h, k(30), &tr[0], &tr[1], &tr[2]).to_f64();
        dist(&s, &oracle(&tr[0].to_f64(), &tr[1].to_f64(), &tr[2].to_f64()))
    }));
    t.check("heisenberg d(sum_30, u x^-1 v)", at30, at30 <= 1e-6);
    let rates: Vec<f64> = triples
        .iter()
        .map(|tr| emergent_sum(&h, &tr[0], &tr[1], &tr[2], &cfg).map_or(f64::NAN, |r| r.1.estimated_rate))
        .collect();
    let (lo, hi) = rates.iter().fold((f64::INFINITY, 0.0f64), |(l, u), r| (l.min(*r), u.max(*r)));
    t.check("rate min", lo, lo >= 0.25);
    t.check("rate max", hi, hi <= 0.75 && rates.iter().all(|r| r.is_finite()));

    let e = make_euclidean(3, 0.5).unwrap();
    let triples = Sampling::new(203, 100, 2.0).tuples(&e, 3);
    let (mut sum_err, mut diff_err) = (0.0f64, 0.0f64);
    for tr in &triples {
        let (x, u, v) = (tr[0].to_f64(), tr[1].to_f64(), tr[2].to_f64());
        let s = emergent_sum(&e, &tr[0], &tr[1], &tr[2], &cfg).unwrap().0.to_f64();
        let d = emergent_difference(&e, &tr[0], &tr[1], &tr[2], &cfg).unwrap().0.to_f64();
        let want_s: Vec<f64> = (0..3).map(|i| u[i] - x[i] + v[i]).collect();
        let want_d: Vec<f64> = (0..3).map(|i| x[i] - u[i] + v[i]).collect();
        sum_err = worst([sum_err, dist(&s, &want_s)]);
        diff_err = worst([diff_err, dist(&d, &want_d)]);
    }
    t.check("euclidean sum vs u-x+v", sum_err, sum_err <= 1e-10);
    t.check("euclidean difference vs x-u+v", diff_err, diff_err <= 1e-10);
    t.finish()
}

/// Tangent group laws.
fn criterion_3() -> Outcome {
    let mut t = Tally::default();
    let cfg = LimitConfig::default();
    let carriers: Vec<(&str, Box<dyn Irq>)> = vec![
        ("euclidean", Box::new(make_euclidean(3, 0.5).unwrap())),
        ("heisenberg", Box::new(make_heisenberg(0.5).unwrap())),
        ("engel", Box::new(make_engel(0.5).unwrap())),
    ];
    for (name, irq) in &carriers {
        let x = irq.sample(301, 1, 1.0).remove(0);
        match verify_tangent_group(irq.as_ref(), &x, &cfg, &Sampling::new(302, 200, 2.0), 1e-7) {
            Ok(reports) => t.reports(name, &reports),
            Err(e) => t.failures.push(format!("{name}: {e}")),
        }
    }
    t.finish()
}

/// Group reconstruction and rejection of a non-distributive carrier.
fn criterion_4() -> Outcome {
    let mut t = Tally::default();
    let h = make_heisenberg(0.5).unwrap();
    let cfg = LimitConfig::default();
    let g = match reconstruct_group(&h, &h.identity(), &cfg) {
        Ok(g) => g,
        Err(e) => return Outcome::new(false, format!("reconstruction failed: {e}")),
    };
    let bch = |a: &[f64], b: &[f64]| [a[0] + b[0], a[1] + b[1], a[2] + b[2] + (a[0] * b[1] - b[0] * a[1]) / 2.0];
    let pairs = Sampling::new(401, 200, 2.0).tuples(&h, 2);
    let err = worst(pairs.iter().map(|p| match g.product(&p[0], &p[1]) {
        Ok(z) => {
            let want = bch(&p[0].to_f64(), &p[1].to_f64());
            z.to_f64().iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        }
        Err(_) => f64::INFINITY,
    }));
    t.check("product vs BCH", err, err <= 1e-8);
    let reports = verify_reconstruction(&h, &g, &cfg, &Sampling::new(402, 200, 2.0), 1e-8);
    let iii: Vec<AxiomReport> = reports.into_iter().filter(|r| r.name == "6.1(iii)").collect();
    t.reports("6.1(iii)", &iii);
    let s = make_sine_shear(0.5, 0.25).unwrap();
    let d = check_distributive(&s, &Sampling::new(403, 1000, 2.0), 1e-3);
    t.check("sineshear distributivity residual", d.max_residual, !d.passed && d.max_residual > 1e-3);
    t.finish()
}

/// Right division by the truncated product, and the loop-isotope limit.
fn criterion_5() -> Outcome {
    let mut t = Tally::default();
    let h = make_heisenberg(0.5).unwrap();
    let m = DivisionMethod::truncated_product();
    let pairs = Sampling::new(501, 100, 2.0).tuples(&h, 2);
    let (mut residual, mut terms) = (0.0f64, 0usize);
    for p in &pairs {
        match right_divide_k(&h, k(1), &p[0], &p[1], &m) {
            Ok(y) => {
                let r = h.metric(&emergent_irq::star_k(&h, k(1), &y.value, &p[1]), &p[0]);
                residual = worst([residual, r]);
                terms = terms.max(y.terms);
            }
            Err(_) => residual = f64::INFINITY,
        }
    }
    t.check("division residual", residual, residual <= 1e-10);
    t.check("product terms", terms as f64, terms <= 60);
    let cfg = LimitConfig::default();
    let triples = Sampling::new(502, 100, 2.0).tuples(&h, 3);
    let gap = worst(triples.iter().map(|tr| {
        let o = loop_isotope_k(&h, k(30), &tr[0], &tr[1], &tr[2], &m);
        let s = emergent_sum(&h, &tr[0], &tr[1], &tr[2], &cfg);
        match (o, s) {
            (Ok(o), Ok((s, _))) => h.metric(&o, &s),
            _ => f64::INFINITY,
        }
    }));
    t.check("d(loop_30, sum_inf)", gap, gap <= 1e-6);
    t.finish()
}

/// Geodesic symmetry through `p` in the upper half-plane:
/// `z ↦ (z − p)/(z − p̄)` to the disk, negate, map back.
fn reflect(p: [f64; 2], z: [f64; 2]) -> [f64; 2] {
    type C = (f64, f64);
    let sub = |a: C, b: C| (a.0 - b.0, a.1 - b.1);
    let mul = |a: C, b: C| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let div = |a: C, b: C| {
        let n = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
    };
    let (p, pc, z) = ((p[0], p[1]), (p[0], -p[1]), (z[0], z[1]));
    let w = div(sub(z, p), sub(z, pc));
    let w = (-w.0, -w.1);
    let r = div(sub(p, mul(w, pc)), sub((1.0, 0.0), w));
    [r.0, r.1]
}

/// Symmetric-space suite.
fn criterion_6() -> Outcome {
    let mut t = Tally::default();
    let h = make_hyperbolic(0.5).unwrap();
    let cfg = LimitConfig::default();
    let sampling = Sampling::new(601, 200, 2.0);
    let method = DivisionMethod::best_for(&h);
    match check_loos_axioms(&h, &cfg, &sampling, 1e-8, &method) {
        Ok(reports) => {
            let l4 = reports.iter().find(|r| r.name == "L4").and_then(|r| r.constant);
            t.notes.push(format!("L4 c={:.3}", l4.unwrap_or(0.0)));
            t.reports("loos", &reports);
        }
        Err(e) => t.failures.push(format!("loos: {e}")),
    }
    t.reports("underline levels", &[check_underline_agreement(&h, &sampling, 1e-8, &method)]);
    let pairs = sampling.tuples(&h, 2);
    let oracle = worst(pairs.iter().map(|p| {
        let want = reflect([p[0].to_f64()[0], p[0].to_f64()[1]], [p[1].to_f64()[0], p[1].to_f64()[1]]);
        worst((1..=3).map(|n| match underline_inv_k(&h, k(n), &p[0], &p[1], &method) {
            Ok(r) => h.metric(&r, &Element::point(&want)),
            Err(_) => f64::INFINITY,
        }))
    }));
    t.check("underline_inv vs reflection", oracle, oracle <= 1e-8);
    for n in [5, 7, 9] {
        let d = make_dihedral_quandle(n).unwrap();
        let r = check_t_involution(&d, &sampling, 0.0);
        t.check(&format!("T∘T dihedral{n}"), r.max_residual, r.passed && r.max_residual == 0.0);
    }
    let floats: Vec<(&str, Box<dyn Irq>)> = vec![
        ("euclidean", Box::new(make_euclidean(3, 0.5).unwrap())),
        ("heisenberg", Box::new(make_heisenberg(0.5).unwrap())),
        ("hyperbolic", Box::new(make_hyperbolic(0.5).unwrap())),
    ];
    for (name, irq) in &floats {
        let r = check_t_involution(irq.as_ref(), &sampling, 1e-12);
        t.check(&format!("T∘T {name}"), r.max_residual, r.passed);
    }
    t.reports("isometry", &[check_inv_isometry(&h, &cfg, &sampling, 1e-8)]);
    t.finish()
}

/// Derivatives.
fn criterion_7() -> Outcome {
    let mut t = Tally::default();
    let e = make_euclidean(3, 0.5).unwrap();
    let cfg = LimitConfig::default();
    let a = [[1.5, -0.5, 2.0], [0.0, 1.0, -1.0], [0.25, 3.0, 0.5]];
    let b = [0.5, -2.0, 1.0];
    let affine = move |x: &[f64]| -> Vec<f64> {
        (0..3).map(|i| (0..3).map(|j| a[i][j] * x[j]).sum::<f64>() + b[i]).collect()
    };
    let f = MapBetweenCarriers::new(&e, &e, move |x: &Element| Element::point(&affine(&x.to_f64()))).unwrap();
    let pairs = Sampling::new(701, 100, 2.0).tuples(&e, 2);
    let err = worst(pairs.iter().map(|p| {
        let (x, u) = (p[0].to_f64(), p[1].to_f64());
        let fx = affine(&x);
        let want: Vec<f64> = (0..3).map(|i| fx[i] + (0..3).map(|j| a[i][j] * (u[j] - x[j])).sum::<f64>()).collect();
        match derivative(&f, &p[0], &p[1], &cfg) {
            Ok((tf, _)) => tf.to_f64().iter().zip(&want).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        }
    }));
    t.check("linear Tf vs f(x)+A(u-x)", err, err <= 1e-9);
    let id = MapBetweenCarriers::new(&e, &e, |x: &Element| x.clone()).unwrap();
    let exact = pairs
        .iter()
        .all(|p| derivative(&id, &p[0], &p[1], &cfg).is_ok_and(|(tf, _)| tf == p[1]));
    t.check("identity Tf(x,u) != u count", if exact { 0.0 } else { 1.0 }, exact);
    let h = make_heisenberg(0.5).unwrap();
    let hd = make_heisenberg(0.5).unwrap();
    let delta = MapBetweenCarriers::new(&h, &h, move |x: &Element| hd.delta(x)).unwrap();
    let r = check_derivative_morphism(&delta, &h.identity(), &cfg, &Sampling::new(702, 100, 2.0), 1e-7);
    t.reports("heisenberg delta morphism", &[r]);
    t.finish()
}

/// Byte-identical reports from repeated CLI runs.
fn criterion_8() -> Outcome {
    let dir = std::env::temp_dir().join(format!("emergent-irq-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let configs = [
        r#"{"carrier":"heisenberg","experiment":"axioms","samples":100,"seed":8}"#,
        r#"{"carrier":"heisenberg","experiment":"converge","samples":50,"seed":8}"#,
        r#"{"carrier":"euclidean","dim":3,"experiment":"reconstruct","samples":50,"seed":8}"#,
        r#"{"carrier":"hyperbolic","experiment":"symmetric","samples":30,"seed":8}"#,
        r#"{"carrier":"heisenberg","experiment":"derivative","samples":30,"seed":8}"#,
        r#"{"carrier":"heisenberg","experiment":"divide","samples":30,"seed":8,"format":"json"}"#,
    ];
    let mut t = Tally::default();
    for (i, cfg) in configs.iter().enumerate() {
        let path = dir.join(format!("c{i}.json"));
        std::fs::write(&path, cfg).unwrap();
        let run = |n: usize| {
            let out = dir.join(format!("r{i}-{n}"));
            let status = Command::new(env!("CARGO_BIN_EXE_emergent-irq"))
                .arg("run")
                .arg("--config")
                .arg(&path)
                .arg("--out")
                .arg(&out)
                .env_remove("EMERGENT_IRQ_SEED")
                .output()
                .unwrap()
                .status;
            (status.code(), std::fs::read(&out).unwrap_or_default())
        };
        let (a, b) = (run(1), run(2));
        let same = a == b && !a.1.is_empty();
        if !same {
            t.failures.push(format!("config {i} reports differ"));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    t.notes.push(format!("{} experiments identical across two runs", configs.len()));
    t.finish()
}

fn main() {
    let criteria: [(u8, &str, fn() -> Outcome); 8] = [
        (1, "irq axiom suite", criterion_1),
        (2, "emergent limits", criterion_2),
        (3, "tangent group", criterion_3),
        (4, "group reconstruction", criterion_4),
        (5, "division and loop limit", criterion_5),
        (6, "symmetric spaces", criterion_6),
        (7, "derivatives", criterion_7),
        (8, "determinism", criterion_8),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Outcome::new(false, "panicked"));
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {n} {verdict} {name} ({:.1}s): {}",
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
