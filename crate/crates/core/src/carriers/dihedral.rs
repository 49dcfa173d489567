use crate::element::Element;
use crate::error::{IrqError, Result};
use crate::irq::{Descriptor, Irq};
use crate::sampling::rng;
use rand::Rng;

/// Dihedral quandle `ℤ/n` with `x * u = 2x − u mod n`.
///
/// `x * ·` is an involution, so `\` coincides with `*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralQuandle {
    n: u64,
}

pub fn make_dihedral_quandle(n: u64) -> Result<DihedralQuandle> {
    if n < 3 {
        return Err(IrqError::InvalidParameter(format!(
            "dihedral quandle needs n >= 3, got {n}"
        )));
    }
    Ok(DihedralQuandle { n })
}

impl DihedralQuandle {
    pub fn order(&self) -> u64 {
        self.n
    }

    fn op(&self, x: u64, u: u64) -> u64 {
        (2 * x + self.n - u) % self.n
    }
}

impl Irq for DihedralQuandle {
    fn name(&self) -> String {
        format!("dihedral(n={})", self.n)
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::Finite { cardinality: self.n }
    }

    fn star(&self, x: &Element, u: &Element) -> Element {
        match (x, u) {
            (Element::Label(x), Element::Label(u)) => Element::Label(self.op(*x, *u)),
            _ => panic!("dihedral quandle operates on labels"),
        }
    }

    fn back(&self, x: &Element, u: &Element) -> Element {
        self.star(x, u)
    }

    /// Cyclic distance on `ℤ/n`.
    fn metric(&self, a: &Element, b: &Element) -> f64 {
        let (a, b) = (a.as_label().unwrap_or(0), b.as_label().unwrap_or(0));
        let d = a.abs_diff(b) % self.n;
        d.min(self.n - d) as f64
    }

    fn base_point(&self) -> Element {
        Element::Label(0)
    }

    fn sample(&self, seed: u64, count: usize, _radius: f64) -> Vec<Element> {
        let mut r = rng(seed);
        (0..count).map(|_| Element::Label(r.gen_range(0..self.n))).collect()
    }

    fn is_uniform(&self) -> bool {
        false
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn elements(&self) -> Option<Vec<Element>> {
        Some((0..self.n).map(Element::Label).collect())
    }
}
