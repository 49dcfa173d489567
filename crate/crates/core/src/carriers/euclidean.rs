use crate::element::{real, Real};
use crate::error::{IrqError, Result};

use super::group::{check_epsilon, make_group_irq, pow_exponent, Dilation, Group, GroupIrq};

/// `ℝ^dim` under addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorSpace {
    pub dim: usize,
}

impl Group for VectorSpace {
    fn name(&self) -> String {
        format!("R{}", self.dim)
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn product(&self, a: &[Real], b: &[Real]) -> Vec<Real> {
        a.iter().zip(b).map(|(x, y)| *x + *y).collect()
    }

    fn inverse(&self, a: &[Real]) -> Vec<Real> {
        a.iter().map(|x| -*x).collect()
    }

    fn is_abelian(&self) -> bool {
        true
    }
}

/// Homothety `x ↦ ε x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarDilation {
    epsilon: f64,
}

impl ScalarDilation {
    pub fn new(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(ScalarDilation { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Dilation for ScalarDilation {
    fn describe(&self) -> String {
        format!("eps={}", self.epsilon)
    }

    fn apply(&self, x: &[Real]) -> Vec<Real> {
        x.iter().map(|v| *v * real(self.epsilon)).collect()
    }

    fn apply_inverse(&self, x: &[Real]) -> Vec<Real> {
        x.iter().map(|v| *v / real(self.epsilon)).collect()
    }

    fn apply_pow(&self, x: &[Real], n: i64) -> Vec<Real> {
        let f = real(self.epsilon).powi(pow_exponent(n));
        x.iter().map(|v| *v * f).collect()
    }

    fn is_morphism(&self) -> bool {
        true
    }

    fn is_contractive(&self) -> bool {
        true
    }

    fn scalar_factor(&self) -> Option<f64> {
        Some(self.epsilon)
    }
}

/// `δ = id`. Gives `x * u = u`: a valid irq, but not contractive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IdentityMap;

impl Dilation for IdentityMap {
    fn describe(&self) -> String {
        "id".into()
    }

    fn apply(&self, x: &[Real]) -> Vec<Real> {
        x.to_vec()
    }

    fn apply_inverse(&self, x: &[Real]) -> Vec<Real> {
        x.to_vec()
    }

    fn apply_pow(&self, x: &[Real], _n: i64) -> Vec<Real> {
        x.to_vec()
    }

    fn is_morphism(&self) -> bool {
        true
    }

    fn is_contractive(&self) -> bool {
        false
    }
}

/// Contraction of `ℝ²` that is not additive:
/// `δ(x₁, x₂) = (ε x₁ + η sin x₂, ε x₂)`.
///
/// It fixes the origin, has the triangular inverse
/// `x₂ = y₂/ε, x₁ = (y₁ − η sin x₂)/ε`, and `δⁿ → 0` pointwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineShear {
    epsilon: f64,
    eta: f64,
}

impl SineShear {
    pub fn new(epsilon: f64, eta: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !eta.is_finite() || eta == 0.0 {
            return Err(IrqError::InvalidParameter(format!(
                "shear amplitude must be finite and nonzero, got {eta}"
            )));
        }
        Ok(SineShear { epsilon, eta })
    }
}

impl Dilation for SineShear {
    fn describe(&self) -> String {
        format!("eps={},eta={}", self.epsilon, self.eta)
    }

    fn apply(&self, x: &[Real]) -> Vec<Real> {
        let (eps, eta) = (real(self.epsilon), real(self.eta));
        vec![x[0] * eps + x[1].sin() * eta, x[1] * eps]
    }

    fn apply_inverse(&self, y: &[Real]) -> Vec<Real> {
        let (eps, eta) = (real(self.epsilon), real(self.eta));
        let x2 = y[1] / eps;
        vec![(y[0] - x2.sin() * eta) / eps, x2]
    }

    fn is_morphism(&self) -> bool {
        false
    }

    fn is_contractive(&self) -> bool {
        true
    }
}

pub type EuclideanIrq = GroupIrq<VectorSpace, ScalarDilation>;

/// `ℝ^dim` with `x * u = x + ε(u − x)`, `x \ u = x + ε⁻¹(u − x)`.
pub fn make_euclidean(dim: usize, epsilon: f64) -> Result<EuclideanIrq> {
    if dim == 0 {
        return Err(IrqError::InvalidParameter("dimension must be at least 1".into()));
    }
    make_group_irq(VectorSpace { dim }, ScalarDilation::new(epsilon)?)
}

/// `ℝ²(δ)` for the non-additive contraction [`SineShear`].
pub fn make_sine_shear(epsilon: f64, eta: f64) -> Result<GroupIrq<VectorSpace, SineShear>> {
    make_group_irq(VectorSpace { dim: 2 }, SineShear::new(epsilon, eta)?)
}
