//! Stratified nilpotent Lie algebras given by structure constants.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::element::{real, Real};
use crate::error::{IrqError, Result};

/// Highest nilpotency step the BCH product is exact for.
pub const MAX_STEP: usize = 4;

const CONSTANT_TOL: f64 = 1e-12;

/// `[e_i, e_j] = Σ coeffs[k] e_k`, basis indices 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketSpec {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<usize, f64>,
}

/// Wire form: `{"layers":[2,1],"brackets":[{"i":0,"j":1,"coeffs":{"2":1.0}}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub layers: Vec<usize>,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
}

/// A validated stratified Lie algebra `V_1 ⊕ … ⊕ V_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedLieAlgebra {
    layer_dims: Vec<usize>,
    weights: Vec<u32>,
    /// Every nonzero `c^k_{ij}`, both orders of `(i, j)`.
    constants: Vec<(usize, usize, usize, f64)>,
}

impl GradedLieAlgebra {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: AlgebraSpec = serde_json::from_str(text)
            .map_err(|e| IrqError::Construction(format!("malformed algebra JSON: {e}")))?;
        Self::new(spec)
    }

    pub fn new(spec: AlgebraSpec) -> Result<Self> {
        let fail = |msg: String| Err(IrqError::Construction(msg));
        if spec.layers.is_empty() || spec.layers.iter().any(|&d| d == 0) {
            return fail(format!("layer dimensions must be positive, got {:?}", spec.layers));
        }
        if spec.layers.len() > MAX_STEP {
            return fail(format!(
                "step {} exceeds the supported maximum {MAX_STEP}",
                spec.layers.len()
            ));
        }
        let weights: Vec<u32> = spec
            .layers
            .iter()
            .enumerate()
            .flat_map(|(l, &d)| std::iter::repeat(l as u32 + 1).take(d))
            .collect();
        let dim = weights.len();

        let mut table: BTreeMap<(usize, usize), BTreeMap<usize, f64>> = BTreeMap::new();
        let mut given = std::collections::BTreeSet::new();
        for b in &spec.brackets {
            if b.i >= dim || b.j >= dim || b.coeffs.keys().any(|&k| k >= dim) {
                return fail(format!("bracket [{}, {}] references a basis index >= {dim}", b.i, b.j));
            }
            if b.coeffs.values().any(|c| !c.is_finite()) {
                return fail(format!("bracket [{}, {}] has a non-finite coefficient", b.i, b.j));
            }
            let nonzero: BTreeMap<usize, f64> =
                b.coeffs.iter().filter(|(_, c)| **c != 0.0).map(|(k, c)| (*k, *c)).collect();
            if b.i == b.j {
                if !nonzero.is_empty() {
                    return fail(format!("[e{0}, e{0}] must vanish", b.i));
                }
                continue;
            }
            if !given.insert((b.i, b.j)) {
                return fail(format!("bracket [{}, {}] given twice", b.i, b.j));
            }
            let negated: BTreeMap<usize, f64> = nonzero.iter().map(|(k, c)| (*k, -c)).collect();
            if let Some(prev) = table.get(&(b.j, b.i)) {
                let agree = prev.len() == negated.len()
                    && prev
                        .iter()
                        .all(|(k, c)| negated.get(k).is_some_and(|d| (c - d).abs() <= CONSTANT_TOL));
                if !agree {
                    return fail(format!("brackets [{0}, {1}] and [{1}, {0}] are not antisymmetric", b.i, b.j));
                }
                continue;
            }
            table.insert((b.i, b.j), nonzero);
            table.insert((b.j, b.i), negated);
        }

        let mut constants = Vec::new();
        for (&(i, j), coeffs) in &table {
            for (&k, &c) in coeffs {
                if weights[k] != weights[i] + weights[j] {
                    return fail(format!(
                        "grading violated: [e{i}, e{j}] has a component on e{k} in layer {} (expected layer {})",
                        weights[k],
                        weights[i] + weights[j]
                    ));
                }
                constants.push((i, j, k, c));
            }
        }

        let algebra = GradedLieAlgebra {
            layer_dims: spec.layers,
            weights,
            constants,
        };
        algebra.check_jacobi()?;
        algebra.check_generated()?;
        Ok(algebra)
    }

    /// Heisenberg algebra: `[X₁, X₂] = X₃`.
    pub fn heisenberg() -> Self {
        Self::from_json(r#"{"layers":[2,1],"brackets":[{"i":0,"j":1,"coeffs":{"2":1.0}}]}"#)
            .expect("heisenberg constants are valid")
    }

    /// Engel algebra: `[X₁, X₂] = X₃`, `[X₁, X₃] = X₄`.
    pub fn engel() -> Self {
        Self::from_json(
            r#"{"layers":[2,1,1],"brackets":[
                {"i":0,"j":1,"coeffs":{"2":1.0}},
                {"i":0,"j":2,"coeffs":{"3":1.0}}]}"#,
        )
        .expect("engel constants are valid")
    }

    /// Abelian algebra `ℝⁿ` (step 1).
    pub fn abelian(n: usize) -> Result<Self> {
        Self::new(AlgebraSpec {
            layers: vec![n],
            brackets: vec![],
        })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn step(&self) -> usize {
        self.layer_dims.len()
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// `Q = Σ i · dim V_i`.
    pub fn homogeneous_dimension(&self) -> usize {
        self.layer_dims.iter().enumerate().map(|(i, d)| (i + 1) * d).sum()
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.constants
            .iter()
            .find(|&&(a, b, c, _)| (a, b, c) == (i, j, k))
            .map_or(0.0, |t| t.3)
    }

    pub fn bracket(&self, a: &[Real], b: &[Real]) -> Vec<Real> {
        let mut out = vec![real(0.0); self.dim()];
        for &(i, j, k, c) in &self.constants {
            out[k] += a[i] * b[j] * real(c);
        }
        out
    }

    fn bracket_f64(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for &(i, j, k, c) in &self.constants {
            out[k] += a[i] * b[j] * c;
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.dim()];
        e[i] = 1.0;
        e
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, c) = (self.basis(i), self.basis(j), self.basis(k));
                    let t1 = self.bracket_f64(&a, &self.bracket_f64(&b, &c));
                    let t2 = self.bracket_f64(&b, &self.bracket_f64(&c, &a));
                    let t3 = self.bracket_f64(&c, &self.bracket_f64(&a, &b));
                    let worst = (0..n).map(|m| (t1[m] + t2[m] + t3[m]).abs()).fold(0.0, f64::max);
                    if worst > CONSTANT_TOL {
                        return Err(IrqError::Construction(format!(
                            "Jacobi identity fails on (e{i}, e{j}, e{k}) with residual {worst:e}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `V_{i+1} = [V_1, V_i]` for every layer above the first.
    fn check_generated(&self) -> Result<()> {
        let layer = |l: u32| -> Vec<usize> { (0..self.dim()).filter(|&i| self.weights[i] == l).collect() };
        for l in 2..=self.step() as u32 {
            let target = layer(l);
            let mut rows: Vec<Vec<f64>> = Vec::new();
            for &i in &layer(1) {
                for &j in &layer(l - 1) {
                    let br = self.bracket_f64(&self.basis(i), &self.basis(j));
                    rows.push(target.iter().map(|&k| br[k]).collect());
                }
            }
            if rank(rows, target.len()) < target.len() {
                return Err(IrqError::Construction(format!(
                    "layer {l} is not spanned by brackets of layer 1 with layer {}",
                    l - 1
                )));
            }
        }
        Ok(())
    }
}

fn rank(mut rows: Vec<Vec<f64>>, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).max_by(|&a, &b| rows[a][c].abs().total_cmp(&rows[b][c].abs())) else {
            break;
        };
        if rows[p][c].abs() <= CONSTANT_TOL {
            continue;
        }
        rows.swap(r, p);
        for q in 0..rows.len() {
            if q != r {
                let f = rows[q][c] / rows[r][c];
                for m in c..cols {
                    rows[q][m] -= f * rows[r][m];
                }
            }
        }
        r += 1;
    }
    r
}
