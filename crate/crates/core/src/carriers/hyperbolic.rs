//! Hyperbolic plane in upper half-plane coordinates `(x, y)`, `y > 0`.
//!
//! Geodesic computations at a base point `p` go through the isometry
//! `z ↦ (z − p)/(z − p̄)` onto the unit disk, which sends `p` to the origin.
//! There geodesics through `p` are diameters and a point at hyperbolic
//! distance `t` sits at Euclidean radius `tanh(t/2)`.

use num_complex::Complex;
use rand::Rng;

use crate::element::{real, to_f64, Element, Real};
use crate::error::Result;
use crate::irq::{ClosedFormDivision, Descriptor, Irq, IterExponent};
use crate::sampling::rng;

use super::group::{check_epsilon, pow_exponent};

type C = Complex<Real>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicPlane {
    epsilon: f64,
}

/// `x * u = exp_x(ε · log_x u)`.
pub fn make_hyperbolic(epsilon: f64) -> Result<HyperbolicPlane> {
    check_epsilon(epsilon)?;
    Ok(HyperbolicPlane { epsilon })
}

fn to_c(e: &Element) -> C {
    let c = e.reals();
    Complex::new(c[0], c[1])
}

fn from_c(z: C) -> Element {
    Element::from_reals(vec![z.re, z.im])
}

fn modulus(z: C) -> Real {
    (z.re * z.re + z.im * z.im).sqrt()
}

fn cdiv(z: C, w: C) -> C {
    let n = w.re * w.re + w.im * w.im;
    let q = z * w.conj();
    C::new(q.re / n, q.im / n)
}

fn to_disk(p: C, z: C) -> C {
    cdiv(z - p, z - p.conj())
}

fn from_disk(p: C, w: C) -> C {
    cdiv(p - w * p.conj(), C::new(real(1.0), real(0.0)) - w)
}

/// For `x ≥ 0`.
fn tanh(x: Real) -> Real {
    let m = x.mul2().exp_m1();
    m / (m + real(2.0))
}

/// `atanh(x) = ½ ln(1 + 2x / (1 − x))` for `0 ≤ x < 1`.
fn atanh(x: Real) -> Real {
    (x.mul2() / (real(1.0) - x)).ln_1p().div2()
}

/// `asinh(x) = ln(1 + x + x² / (1 + √(1 + x²)))` for `x ≥ 0`.
fn asinh(x: Real) -> Real {
    let s = (x * x + real(1.0)).sqrt();
    (x + x * x / (s + real(1.0))).ln_1p()
}

/// Rescale disk point `w` so that its hyperbolic distance to 0 is multiplied by `factor`.
fn scale_disk(w: C, factor: Real) -> C {
    let r = modulus(w);
    if r.eq_zero() {
        return w;
    }
    let t = atanh(r) * factor;
    w * (tanh(t) / r)
}

impl HyperbolicPlane {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Point at geodesic coordinate `factor · d(x, u)` on the geodesic from `x` through `u`.
    pub fn scale_along(&self, x: &Element, u: &Element, factor: Real) -> Element {
        let p = to_c(x);
        from_c(from_disk(p, scale_disk(to_disk(p, to_c(u)), factor)))
    }

    /// Geodesic point symmetry through `x`.
    pub fn reflect(&self, x: &Element, y: &Element) -> Element {
        let p = to_c(x);
        from_c(from_disk(p, -to_disk(p, to_c(y))))
    }

    /// Tangent vector at `x` (in half-plane coordinates) of the geodesic to `u`,
    /// with Riemannian length `d(x, u)`.
    pub fn log_map(&self, x: &Element, u: &Element) -> Element {
        let p = to_c(x);
        let w = to_disk(p, to_c(u));
        let r = modulus(w);
        if r.eq_zero() {
            return Element::point(&[0.0, 0.0]);
        }
        let t = atanh(r).mul2();
        // d/dz of the disk map at p is 1/(2i y), and the disk metric at 0 is 2|dw|.
        let v = C::new(real(0.0), p.im) * (w * (t / r));
        from_c(v)
    }

    pub fn exp_map(&self, x: &Element, v: &Element) -> Element {
        let p = to_c(x);
        let v = to_c(v);
        let len = modulus(v) / p.im;
        if len.eq_zero() {
            return x.clone();
        }
        let dir = cdiv(v, C::new(real(0.0), p.im * len));
        from_c(from_disk(p, dir * tanh(len.div2())))
    }

    /// Riemannian norm of a tangent vector at `x`.
    pub fn tangent_norm(&self, x: &Element, v: &Element) -> f64 {
        to_f64(modulus(to_c(v)) / to_c(x).im)
    }

    pub fn distance(&self, a: &Element, b: &Element) -> f64 {
        let (a, b) = (to_c(a), to_c(b));
        let chord = modulus(a - b) / (a.im * b.im).sqrt().mul2();
        to_f64(asinh(chord).mul2())
    }
}

impl Irq for HyperbolicPlane {
    fn name(&self) -> String {
        format!("hyperbolic(eps={})", self.epsilon)
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::Continuous { dim: 2 }
    }

    fn contains(&self, e: &Element) -> bool {
        matches!(e, Element::Point(c) if c.len() == 2 && e.is_finite() && c[1] > real(0.0))
    }

    fn star(&self, x: &Element, u: &Element) -> Element {
        self.scale_along(x, u, real(self.epsilon))
    }

    fn back(&self, x: &Element, u: &Element) -> Element {
        self.scale_along(x, u, real(self.epsilon).recip())
    }

    /// Geodesic scaling composes: `x *_k u` scales `d(x, u)` by `εᵏ`.
    fn star_pow(&self, k: i64, x: &Element, u: &Element) -> Element {
        self.scale_along(x, u, real(self.epsilon).powi(pow_exponent(k)))
    }

    fn metric(&self, a: &Element, b: &Element) -> f64 {
        self.distance(a, b)
    }

    fn base_point(&self) -> Element {
        Element::point(&[0.0, 1.0])
    }

    /// Points at hyperbolic distance `radius · √U` from `i` in a uniform direction.
    fn sample(&self, seed: u64, count: usize, radius: f64) -> Vec<Element> {
        let mut r = rng(seed);
        let base = to_c(&self.base_point());
        (0..count)
            .map(|_| {
                let theta: f64 = r.gen::<f64>() * std::f64::consts::TAU;
                let t = radius * r.gen::<f64>().sqrt();
                let rho = (t / 2.0).tanh();
                let w = C::new(real(rho * theta.cos()), real(rho * theta.sin()));
                from_c(from_disk(base, w))
            })
            .collect()
    }

    fn is_uniform(&self) -> bool {
        true
    }

    fn closed_form_division(&self) -> Option<&dyn ClosedFormDivision> {
        Some(self)
    }
}

impl ClosedFormDivision for HyperbolicPlane {
    /// `y` with `y *_k a = b`: `y`, `b`, `a` lie on one geodesic with
    /// `d(y, b) = εᵏ d(y, a)`, so `y = exp_a(log_a(b) / (1 − εᵏ))`.
    fn divide(&self, k: IterExponent, b: &Element, a: &Element) -> Element {
        let ek = real(self.epsilon).powi(k.get() as i32);
        self.scale_along(a, b, (real(1.0) - ek).recip())
    }
}
