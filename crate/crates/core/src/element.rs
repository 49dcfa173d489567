//! Points of a carrier set.
//!
//! Continuous carriers store coordinates as 256-bit floats (237-bit
//! significand). The emergent operations are limits of expressions that
//! rescale quantities of size `ε^{wk}` by `ε^{-wk}` in a layer of weight `w`,
//! so rounding error grows like `ε^{-wk}` times the unit roundoff. On a
//! step-3 group at `ε = 1/2` a limit settling at `1e-12` near `k = 40` needs
//! a roundoff well below `8^{-40} · 1e-12 ≈ 1e-48`.

use std::fmt;

use f256::f256;
use serde::{Serialize, Serializer};

/// Scalar used for carrier coordinates.
pub type Real = f256;

#[inline]
pub fn real(x: f64) -> Real {
    f256::from(x)
}

const FRACTION_BITS: u32 = 236;
const EXP_BIAS: i64 = 262_143;
const EXP_MASK: u128 = (1 << 19) - 1;

/// Nearest `f64`, with overflow to infinity and underflow to zero.
pub fn to_f64(x: Real) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let (hi, _) = x.to_bits();
    let negative = hi >> 127 == 1;
    let biased = (hi >> (FRACTION_BITS - 128)) & EXP_MASK;
    let signed = |v: f64| if negative { -v } else { v };
    if x.is_infinite() {
        return signed(f64::INFINITY);
    }
    if biased == 0 {
        return signed(0.0);
    }
    let e = biased as i64 - EXP_BIAS;
    if e > 1023 {
        return signed(f64::INFINITY);
    }
    if e < -1074 {
        return signed(0.0);
    }
    // Top 52 fraction bits, truncated.
    let fraction = (hi >> (FRACTION_BITS - 128 - 52)) & ((1 << 52) - 1);
    let mut t = f64::from_bits(((1023u128 << 52) | fraction) as u64);
    t = scale2(t, e);
    let t = signed(t);
    let away = if t == 0.0 {
        signed(f64::from_bits(1))
    } else {
        f64::from_bits(t.to_bits() + 1)
    };
    if (x - f256::from(away)).abs() < (x - f256::from(t)).abs() {
        away
    } else {
        t
    }
}

/// `t · 2^e` in two steps so that intermediate powers stay finite.
fn scale2(t: f64, e: i64) -> f64 {
    let half = e / 2;
    t * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
}

/// A point of a carrier: a coordinate vector, or a label of a finite carrier.
#[derive(Clone, PartialEq)]
pub enum Element {
    Point(Vec<Real>),
    Label(u64),
}

impl Element {
    pub fn point(coords: &[f64]) -> Self {
        Element::Point(coords.iter().copied().map(real).collect())
    }

    pub fn from_reals(coords: Vec<Real>) -> Self {
        Element::Point(coords)
    }

    pub fn label(n: u64) -> Self {
        Element::Label(n)
    }

    pub fn coords(&self) -> Option<&[Real]> {
        match self {
            Element::Point(c) => Some(c),
            Element::Label(_) => None,
        }
    }

    /// Coordinates of a point. Panics on a label; carriers only call this on
    /// elements they produced or validated.
    pub fn reals(&self) -> &[Real] {
        match self {
            Element::Point(c) => c,
            Element::Label(l) => panic!("expected a coordinate point, found label {l}"),
        }
    }

    pub fn as_label(&self) -> Option<u64> {
        match self {
            Element::Label(l) => Some(*l),
            Element::Point(_) => None,
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Element::Point(c) => c.iter().map(|x| to_f64(*x)).collect(),
            Element::Label(l) => vec![*l as f64],
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.coords().map(<[Real]>::len)
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Element::Point(c) => c.iter().all(|x| x.is_finite()),
            Element::Label(_) => true,
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Point(_) => write!(f, "Point({:?})", self.to_f64()),
            Element::Label(l) => write!(f, "Label({l})"),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Element::Point(_) => self.to_f64().serialize(s),
            Element::Label(l) => l.serialize(s),
        }
    }
}

/// Euclidean distance between coordinate vectors of equal length.
pub fn coord_distance(a: &[Real], b: &[Real]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = real(0.0);
    for (x, y) in a.iter().zip(b) {
        let d = *x - *y;
        acc += d * d;
    }
    to_f64(acc.sqrt())
}

pub fn coord_norm(a: &[Real]) -> f64 {
    let mut acc = real(0.0);
    for x in a {
        acc += *x * *x;
    }
    to_f64(acc.sqrt())
}
