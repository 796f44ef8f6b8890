//! Seeded random source for evaluation points and fixture coefficients.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::{CMatrix, C64};

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Default for Sampler {
    fn default() -> Self {
        Self::new(crate::DEFAULT_SEED)
    }
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform point on the unit circle.
    pub fn unit_circle(&mut self) -> C64 {
        let t: f64 = self.rng.random_range(0.0..std::f64::consts::TAU);
        C64::from_polar(1.0, t)
    }

    pub fn unit_circle_points(&mut self, k: usize) -> Vec<C64> {
        (0..k).map(|_| self.unit_circle()).collect()
    }

    /// Standard complex normal: `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> C64 {
        let re: f64 = StandardNormal.sample(&mut self.rng);
        let im: f64 = StandardNormal.sample(&mut self.rng);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn normal_matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn uniform_usize(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.random_range(lo..=hi_inclusive)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random::<bool>()
    }
}
