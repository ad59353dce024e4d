//! Seeded random streams.
//!
//! All randomness comes from xoshiro256++ seeded through SplitMix64
//! (`seed_from_u64`). Normal variates use the Box–Muller transform and are
//! produced in pairs; the second member of each pair is handed out on the
//! next call, so the sequence of variates depends only on the seed.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use std::f64::consts::TAU;

#[derive(Debug, Clone)]
pub struct GaussianSource {
    rng: Xoshiro256PlusPlus,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform variate on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.gen::<f64>()
    }

    /// Standard normal variate.
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite
        let u1 = 1.0 - self.rng.gen::<f64>();
        let u2 = self.rng.gen::<f64>();
        let radius = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        self.spare = Some(radius * s);
        radius * c
    }

    pub fn normal(&mut self, std_dev: f64) -> f64 {
        std_dev * self.standard_normal()
    }

    pub fn fill_standard_normal(&mut self, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = self.standard_normal());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = GaussianSource::new(42);
        let mut b = GaussianSource::new(42);
        for _ in 0..101 {
            assert_eq!(a.standard_normal().to_bits(), b.standard_normal().to_bits());
        }
    }

    #[test]
    fn moments_are_standard() {
        let mut g = GaussianSource::new(1);
        let n = 200_000;
        let (mut s1, mut s2, mut s4) = (0.0, 0.0, 0.0);
        for _ in 0..n {
            let z = g.standard_normal();
            s1 += z;
            s2 += z * z;
            s4 += z * z * z * z;
        }
        let n = n as f64;
        assert!((s1 / n).abs() < 0.01);
        assert!((s2 / n - 1.0).abs() < 0.01);
        assert!((s4 / n - 3.0).abs() < 0.06);
    }

    #[test]
    fn uniform_stays_in_range() {
        let mut g = GaussianSource::new(9);
        for _ in 0..10_000 {
            let u = g.uniform(0.2, 1.8);
            assert!((0.2..1.8).contains(&u));
        }
    }
}
