//! Seeded sampling of outcome distributions.
//!
//! Outcome statistics of Gaussian observables on Gaussian states are
//! multivariate normal laws; this module draws from them reproducibly
//! (explicit RNG, ChaCha-based in the CLI) and estimates empirical moments
//! for comparison against the analytic values.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::observables::GaussianDistribution;
use crate::{Error, Result};

/// Draws from a multivariate normal law via an affine push of iid standard
/// normals: `x = mean + F z` with `F Fᵀ = cov`.
#[derive(Debug, Clone)]
pub struct MvnSampler {
    mean: DVector<f64>,
    factor: DMatrix<f64>,
}

impl MvnSampler {
    /// Prepares a sampler for `dist`.
    ///
    /// The factor is the Cholesky root when the covariance is positive
    /// definite, and an eigenvalue square root with small negative
    /// eigenvalues clamped to zero otherwise, so singular (deterministic
    /// directions) and boundary covariances are supported.
    ///
    /// # Errors
    ///
    /// Covariance with an eigenvalue below `-1e-8` relative to scale.
    pub fn new(dist: &GaussianDistribution) -> Result<Self> {
        let factor = match Cholesky::new(dist.cov.clone()) {
            Some(ch) => ch.l(),
            None => {
                let eig = dist.cov.clone().symmetric_eigen();
                let scale = eig.eigenvalues.amax().max(1.0);
                let mut root = eig.eigenvectors.clone();
                for (j, lambda) in eig.eigenvalues.iter().enumerate() {
                    if *lambda < -1e-8 * scale {
                        return Err(Error::InvalidInput(format!(
                            "covariance is not positive semidefinite (eigenvalue {lambda:.3e})"
                        )));
                    }
                    root.column_mut(j).scale_mut(lambda.max(0.0).sqrt());
                }
                root
            }
        };
        Ok(MvnSampler {
            mean: dist.mean.clone(),
            factor,
        })
    }

    /// Dimension of the sampled vectors.
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// One draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let z = DVector::from_fn(self.factor.ncols(), |_, _| rng.sample(StandardNormal));
        &self.mean + &self.factor * z
    }

    /// `count` draws, in order.
    pub fn sample_n<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<DVector<f64>> {
        (0..count).map(|_| self.sample(rng)).collect()
    }
}

/// Streaming accumulator for the sample mean and (unbiased) sample
/// covariance.
#[derive(Debug, Clone)]
pub struct MomentAccumulator {
    count: usize,
    sum: DVector<f64>,
    sum_outer: DMatrix<f64>,
}

impl MomentAccumulator {
    /// Empty accumulator for vectors of length `dim`.
    pub fn new(dim: usize) -> Self {
        MomentAccumulator {
            count: 0,
            sum: DVector::zeros(dim),
            sum_outer: DMatrix::zeros(dim, dim),
        }
    }

    /// Folds one observation in.
    pub fn push(&mut self, x: &DVector<f64>) {
        self.count += 1;
        self.sum += x;
        self.sum_outer += x * x.transpose();
    }

    /// Number of observations folded so far.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Sample mean and unbiased sample covariance.
    ///
    /// # Errors
    ///
    /// Fewer than two observations.
    pub fn finish(&self) -> Result<GaussianDistribution> {
        if self.count < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 observations for moments, got {}",
                self.count
            )));
        }
        let n = self.count as f64;
        let mean = self.sum.unscale(n);
        let raw = &self.sum_outer - (&mean * mean.transpose()).scale(n);
        let mut cov = raw.unscale(n - 1.0);
        // The accumulator is symmetric and PSD up to floating-point order
        // of operations; symmetrize and skip the constructor's PSD check.
        cov = (&cov + cov.transpose()).unscale(2.0);
        Ok(GaussianDistribution::from_parts_unchecked(mean, cov))
    }
}

/// Sample mean and unbiased covariance of a batch of draws.
///
/// # Errors
///
/// Fewer than two draws, or inconsistent dimensions.
pub fn empirical_moments(draws: &[DVector<f64>]) -> Result<GaussianDistribution> {
    let first = draws
        .first()
        .ok_or_else(|| Error::InvalidInput("no draws to take moments of".into()))?;
    let mut acc = MomentAccumulator::new(first.len());
    for (i, x) in draws.iter().enumerate() {
        if x.len() != first.len() {
            return Err(Error::InvalidDimension(format!(
                "draw {i} has length {}, expected {}",
                x.len(),
                first.len()
            )));
        }
        acc.push(x);
    }
    acc.finish()
}
