//! Synthetic data: the two-corner toy problem and standard-normal noise
//! matrices for timing runs.

use alloc::vec::Vec;

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Normal, StandardNormal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

const INLIER_CENTER: f64 = 0.7;
const INLIER_SD: f64 = 0.08;
const OUTLIER_SIDE: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Inliers near (0.7, 0.7), outliers in `[0, 0.3]^2`.
    LowerLeft,
    /// Mirror image: inliers near (0.3, 0.3), outliers in `[0.7, 1]^2`.
    UpperRight,
}

/// Parameters of the toy problem. The geometry is a stand-in chosen to
/// give a compact inlier blob and a corner cloud of outliers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToySpec {
    pub n_inliers: usize,
    pub n_outliers: usize,
    pub orientation: Orientation,
    pub seed: u64,
}

impl Default for ToySpec {
    fn default() -> Self {
        Self {
            n_inliers: 400,
            n_outliers: 40,
            orientation: Orientation::LowerLeft,
            seed: 0,
        }
    }
}

/// Two-dimensional labelled toy data in the unit square; inlier rows come
/// first. `UpperRight` is exactly `1 - x` of the `LowerLeft` draw with the
/// same seed.
pub fn gen_toy(spec: &ToySpec) -> Result<Dataset> {
    if spec.n_inliers == 0 || spec.n_outliers == 0 {
        return Err(Error::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let inlier = Normal::new(INLIER_CENTER, INLIER_SD).expect("valid normal parameters");
    let outlier = Uniform::new_inclusive(0.0, OUTLIER_SIDE).expect("valid uniform range");

    let n = spec.n_inliers + spec.n_outliers;
    let mut values = Vec::with_capacity(2 * n);
    for _ in 0..2 * spec.n_inliers {
        let x: f64 = inlier.sample(&mut rng);
        values.push(x.clamp(0.0, 1.0));
    }
    for _ in 0..2 * spec.n_outliers {
        values.push(outlier.sample(&mut rng));
    }
    if spec.orientation == Orientation::UpperRight {
        for v in &mut values {
            *v = 1.0 - *v;
        }
    }
    let mut labels = Vec::with_capacity(n);
    labels.resize(spec.n_inliers, 0u8);
    labels.resize(n, 1u8);
    Dataset::from_flat(values, 2, None, Some(labels))
}

/// `n x d` matrix of independent standard-normal draws, unlabelled.
pub fn gen_random(n: usize, d: usize, seed: u64) -> Result<Dataset> {
    if n == 0 || d == 0 {
        return Err(Error::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n * d)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    Dataset::from_flat(values, d, None, None)
}
