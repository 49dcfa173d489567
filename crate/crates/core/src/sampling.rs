//! Seeded sampling of compact sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::irq::Irq;

/// Where and how many points to draw for a property check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub seed: u64,
    pub count: usize,
    pub radius: f64,
}

impl Sampling {
    pub fn new(seed: u64, count: usize, radius: f64) -> Self {
        Sampling { seed, count, radius }
    }

    /// `count` tuples of `arity` points each; tuple `i` uses the points
    /// `arity*i .. arity*(i+1)` of one seeded stream.
    pub fn tuples<I: Irq + ?Sized>(&self, irq: &I, arity: usize) -> Vec<Vec<Element>> {
        let pts = irq.sample(self.seed, self.count * arity, self.radius);
        pts.chunks(arity).map(<[Element]>::to_vec).collect()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the Euclidean ball of `radius` around `center`.
pub fn ball_point<R: Rng>(rng: &mut R, center: &[f64], radius: f64) -> Vec<f64> {
    let dim = center.len();
    let mut dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    let r = radius * rng.gen::<f64>().powf(1.0 / dim as f64);
    if norm > 0.0 {
        for d in &mut dir {
            *d *= r / norm;
        }
    }
    dir.iter().zip(center).map(|(d, c)| c + d).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_points_stay_inside_and_repeat_per_seed() {
        let mut a = rng(7);
        let mut b = rng(7);
        for _ in 0..200 {
            let p = ball_point(&mut a, &[1.0, -1.0, 0.0], 2.0);
            let q = ball_point(&mut b, &[1.0, -1.0, 0.0], 2.0);
            assert_eq!(p, q);
            let r = ((p[0] - 1.0).powi(2) + (p[1] + 1.0).powi(2) + p[2].powi(2)).sqrt();
            assert!(r <= 2.0 + 1e-12);
        }
    }
}
