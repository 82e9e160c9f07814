use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::QuadError;

/// Samples per RNG stream; block `b` uses ChaCha20 stream `b`.
pub const MC_BLOCK: usize = 4096;
pub const MIN_SAMPLES: usize = 1000;

/// Multivariate normal importance density.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    mean: Vec<f64>,
    /// Lower Cholesky factor of the covariance.
    chol: DMatrix<f64>,
    /// `log((2π)^{d/2}·det L)`.
    log_norm: f64,
}

impl GaussianSampler {
    pub fn new(mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Self, QuadError> {
        let d = mean.len();
        if cov.nrows() != d || cov.ncols() != d {
            return Err(QuadError::InvalidCovariance("dimension mismatch".into()));
        }
        let chol = cov
            .cholesky()
            .ok_or_else(|| QuadError::InvalidCovariance("not positive definite".into()))?
            .l();
        let log_det: f64 = (0..d).map(|i| chol[(i, i)].ln()).sum();
        Ok(Self {
            mean,
            chol,
            log_norm: 0.5 * d as f64 * (2.0 * PI).ln() + log_det,
        })
    }

    pub fn diagonal(mean: Vec<f64>, sigmas: &[f64]) -> Result<Self, QuadError> {
        let cov = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            sigmas.len(),
            sigmas.iter().map(|s| s * s),
        ));
        Self::new(mean, cov)
    }

    pub fn isotropic(mean: Vec<f64>, sigma: f64) -> Result<Self, QuadError> {
        let d = mean.len();
        Self::diagonal(mean, &vec![sigma; d])
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Density at `x`.
    pub fn density(&self, x: &[f64]) -> f64 {
        let d = self.dim();
        let r = nalgebra::DVector::from_iterator(d, x.iter().zip(&self.mean).map(|(a, m)| a - m));
        let z = self
            .chol
            .solve_lower_triangular(&r)
            .expect("Cholesky factor is nonsingular");
        (-0.5 * z.norm_squared() - self.log_norm).exp()
    }

    /// Draws one point into `x` and returns its density.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, z: &mut [f64], x: &mut [f64]) -> f64 {
        let d = self.dim();
        let mut q = 0.0;
        for v in z.iter_mut() {
            *v = rng.sample(StandardNormal);
            q += *v * *v;
        }
        for i in 0..d {
            let mut acc = self.mean[i];
            for j in 0..=i {
                acc += self.chol[(i, j)] * z[j];
            }
            x[i] = acc;
        }
        (-0.5 * q - self.log_norm).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: Complex64,
    pub stderr: f64,
    pub n: usize,
    pub seed: u64,
}

/// Running statistics of a block: count, mean, sum of squared deviations.
#[derive(Clone, Copy)]
struct Moments {
    n: f64,
    mean: Complex64,
    m2: f64,
}

impl Moments {
    fn of(values: &[Complex64]) -> Self {
        let n = values.len() as f64;
        let mean = super::sum::pairwise_sum(values) / n;
        let dev: Vec<f64> = values.iter().map(|v| (v - mean).norm_sqr()).collect();
        Self {
            n,
            mean,
            m2: super::sum::pairwise_sum_f64(&dev),
        }
    }

    fn merge(a: Self, b: Self) -> Self {
        let n = a.n + b.n;
        let delta = b.mean - a.mean;
        Self {
            n,
            mean: a.mean + delta * (b.n / n),
            m2: a.m2 + b.m2 + delta.norm_sqr() * a.n * b.n / n,
        }
    }

    fn merge_all(v: &[Self]) -> Self {
        if v.len() == 1 {
            v[0]
        } else {
            let mid = v.len() / 2;
            Self::merge(Self::merge_all(&v[..mid]), Self::merge_all(&v[mid..]))
        }
    }
}

/// Importance-sampling estimate of `∫ f(X) dX` with `X ~ sampler`.
///
/// The result is bit-identical for a given seed regardless of thread count:
/// each block of [`MC_BLOCK`] samples draws from its own ChaCha20 stream and
/// the block statistics are merged in a fixed pairwise order.
pub fn monte_carlo<F>(
    f: F,
    sampler: &GaussianSampler,
    n: usize,
    seed: u64,
) -> Result<McEstimate, QuadError>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let mut out = monte_carlo_multi(
        |x, out: &mut [Complex64]| out[0] = f(x),
        1,
        sampler,
        n,
        seed,
    )?;
    Ok(out.remove(0))
}

/// Several integrands sharing one sample set (common random numbers).
pub fn monte_carlo_multi<F>(
    f: F,
    outputs: usize,
    sampler: &GaussianSampler,
    n: usize,
    seed: u64,
) -> Result<Vec<McEstimate>, QuadError>
where
    F: Fn(&[f64], &mut [Complex64]) + Sync,
{
    if n < MIN_SAMPLES {
        return Err(QuadError::TooFewSamples { n });
    }
    let d = sampler.dim();
    let nblocks = n.div_ceil(MC_BLOCK);
    let blocks: Vec<Vec<Moments>> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let lo = b * MC_BLOCK;
            let hi = (lo + MC_BLOCK).min(n);
            let mut z = vec![0.0; d];
            let mut x = vec![0.0; d];
            let mut vals = vec![Complex64::new(0.0, 0.0); outputs];
            let mut ratios: Vec<Vec<Complex64>> = vec![Vec::with_capacity(hi - lo); outputs];
            for _ in lo..hi {
                let p = sampler.sample(&mut rng, &mut z, &mut x);
                f(&x, &mut vals);
                for (r, v) in ratios.iter_mut().zip(&vals) {
                    // A density that underflows only happens far in the tails,
                    // where the integrands used here have vanished as well.
                    r.push(if p > 0.0 {
                        v / p
                    } else {
                        Complex64::new(0.0, 0.0)
                    });
                }
            }
            ratios.iter().map(|r| Moments::of(r)).collect()
        })
        .collect();
    Ok((0..outputs)
        .map(|k| {
            let per: Vec<Moments> = blocks.iter().map(|b| b[k]).collect();
            let m = Moments::merge_all(&per);
            let var = if m.n > 1.0 { m.m2 / (m.n - 1.0) } else { 0.0 };
            McEstimate {
                estimate: m.mean,
                stderr: (var / m.n).sqrt(),
                n,
                seed,
            }
        })
        .collect())
}
