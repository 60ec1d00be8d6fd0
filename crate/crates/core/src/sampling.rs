//! Seeded sampling. Every randomized check in the crate draws from a
//! ChaCha stream keyed by a single `u64` seed, so results are reproducible
//! across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{Matrix, Vector};

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent sub-stream, e.g. one per instance in a sweep.
    pub fn derive(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn normal_vector(&mut self, dim: usize) -> Vector {
        Vector::from_fn(dim, |_, _| self.normal())
    }

    pub fn normal_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.normal())
    }

    /// Uniform point in the closed ball of the given radius around `center`.
    pub fn ball_point(&mut self, center: &Vector, radius: f64) -> Vector {
        let dim = center.len();
        let mut dir = self.normal_vector(dim);
        let n = dir.norm();
        if n > 0.0 {
            dir /= n;
        }
        let r = radius * self.rng.random::<f64>().powf(1.0 / dim.max(1) as f64);
        center + dir * r
    }

    /// Pair of standard-normal points, scaled by `scale`.
    pub fn normal_pair(&mut self, dim: usize, scale: f64) -> (Vector, Vector) {
        (self.normal_vector(dim) * scale, self.normal_vector(dim) * scale)
    }

    /// Random skew-symmetric matrix with spectral norm exactly `norm`.
    pub fn skew_matrix(&mut self, dim: usize, norm: f64) -> Matrix {
        let g = self.normal_matrix(dim, dim);
        let s = &g - g.transpose();
        let sn = crate::linalg::spectral_norm(&s);
        if sn > 0.0 {
            s * (norm / sn)
        } else {
            s
        }
    }

    /// Random symmetric matrix whose eigenvalues are drawn uniformly from
    /// `[lo, hi]`, with `lo` and `hi` both attained when `dim >= 2`.
    pub fn symmetric_with_spectrum(&mut self, dim: usize, lo: f64, hi: f64) -> Matrix {
        let g = self.normal_matrix(dim, dim);
        let q = g.qr().q();
        let eig = Vector::from_fn(dim, |i, _| match i {
            0 => lo,
            1 => hi,
            _ => self.uniform(lo, hi),
        });
        let m = &q * Matrix::from_diagonal(&eig) * q.transpose();
        (&m + m.transpose()) * 0.5
    }
}
