//! Carnot groups in exponential coordinates and their dilations.

use crate::element::{real, Real};
use crate::error::Result;

use super::group::{check_epsilon, make_group_irq, pow_exponent, Dilation, Group, GroupIrq};
use super::lie::GradedLieAlgebra;

/// Simply connected nilpotent group of a graded algebra, identified with the
/// algebra through `exp`. The product is the Baker–Campbell–Hausdorff series
///
/// `X·Y = X + Y + ½[X,Y] + (1/12)[X,[X,Y]] − (1/12)[Y,[X,Y]] − (1/24)[Y,[X,[X,Y]]]`
///
/// which is exact up to step 4.
#[derive(Debug, Clone, PartialEq)]
pub struct CarnotGroup {
    algebra: GradedLieAlgebra,
}

impl CarnotGroup {
    pub fn new(algebra: GradedLieAlgebra) -> Self {
        CarnotGroup { algebra }
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.algebra
    }
}

/// `acc += (num / den) v`, dividing last so that `1/12` is not rounded to `f64`.
fn axpy(acc: &mut [Real], num: f64, den: f64, v: &[Real]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += *x * real(num) / real(den);
    }
}

impl Group for CarnotGroup {
    fn name(&self) -> String {
        format!("carnot{:?}", self.algebra.layer_dims())
    }

    fn dim(&self) -> usize {
        self.algebra.dim()
    }

    fn product(&self, x: &[Real], y: &[Real]) -> Vec<Real> {
        let mut z: Vec<Real> = x.iter().zip(y).map(|(a, b)| *a + *b).collect();
        let step = self.algebra.step();
        if step < 2 {
            return z;
        }
        let lie = &self.algebra;
        let xy = lie.bracket(x, y);
        axpy(&mut z, 1.0, 2.0, &xy);
        if step < 3 {
            return z;
        }
        let x_xy = lie.bracket(x, &xy);
        axpy(&mut z, 1.0, 12.0, &x_xy);
        axpy(&mut z, -1.0, 12.0, &lie.bracket(y, &xy));
        if step < 4 {
            return z;
        }
        axpy(&mut z, -1.0, 24.0, &lie.bracket(y, &x_xy));
        z
    }

    fn inverse(&self, a: &[Real]) -> Vec<Real> {
        a.iter().map(|x| -*x).collect()
    }

    fn weights(&self) -> Vec<u32> {
        self.algebra.weights().to_vec()
    }

    fn is_abelian(&self) -> bool {
        self.algebra.step() == 1
    }
}

/// First Heisenberg group on `ℝ³`:
/// `(a,b,c)·(a',b',c') = (a+a', b+b', c+c'+(ab'−a'b)/2)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HeisenbergGroup;

impl Group for HeisenbergGroup {
    fn name(&self) -> String {
        "heisenberg".into()
    }

    fn dim(&self) -> usize {
        3
    }

    fn product(&self, x: &[Real], y: &[Real]) -> Vec<Real> {
        vec![
            x[0] + y[0],
            x[1] + y[1],
            x[2] + y[2] + (x[0] * y[1] - y[0] * x[1]).div2(),
        ]
    }

    fn inverse(&self, a: &[Real]) -> Vec<Real> {
        a.iter().map(|x| -*x).collect()
    }

    fn weights(&self) -> Vec<u32> {
        vec![1, 1, 2]
    }
}

/// `δ_ε` scaling the coordinates of layer `i` by `εⁱ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedDilation {
    epsilon: f64,
    factors: Vec<Real>,
}

impl GradedDilation {
    pub fn new(epsilon: f64, weights: &[u32]) -> Result<Self> {
        check_epsilon(epsilon)?;
        let factors = weights.iter().map(|&w| real(epsilon).powi(w as i32)).collect();
        Ok(GradedDilation { epsilon, factors })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Dilation for GradedDilation {
    fn describe(&self) -> String {
        format!("eps={}", self.epsilon)
    }

    fn apply(&self, x: &[Real]) -> Vec<Real> {
        x.iter().zip(&self.factors).map(|(v, f)| *v * *f).collect()
    }

    fn apply_inverse(&self, x: &[Real]) -> Vec<Real> {
        x.iter().zip(&self.factors).map(|(v, f)| *v / *f).collect()
    }

    fn apply_pow(&self, x: &[Real], n: i64) -> Vec<Real> {
        let n = pow_exponent(n);
        x.iter().zip(&self.factors).map(|(v, f)| *v * f.powi(n)).collect()
    }

    fn is_morphism(&self) -> bool {
        true
    }

    fn is_contractive(&self) -> bool {
        true
    }

    fn scalar_factor(&self) -> Option<f64> {
        let first = self.factors.first()?;
        self.factors.iter().all(|f| f == first).then_some(self.epsilon)
    }
}

pub type HeisenbergIrq = GroupIrq<HeisenbergGroup, GradedDilation>;
pub type CarnotIrq = GroupIrq<CarnotGroup, GradedDilation>;

/// Heisenberg group with `δ_ε(a,b,c) = (εa, εb, ε²c)`.
pub fn make_heisenberg(epsilon: f64) -> Result<HeisenbergIrq> {
    let delta = GradedDilation::new(epsilon, &HeisenbergGroup.weights())?;
    make_group_irq(HeisenbergGroup, delta)
}

/// Carnot group of `algebra` with its graded dilation `δ_ε`.
pub fn make_carnot(algebra: GradedLieAlgebra, epsilon: f64) -> Result<CarnotIrq> {
    let group = CarnotGroup::new(algebra);
    let delta = GradedDilation::new(epsilon, &group.weights())?;
    make_group_irq(group, delta)
}

pub fn make_engel(epsilon: f64) -> Result<CarnotIrq> {
    make_carnot(GradedLieAlgebra::engel(), epsilon)
}
