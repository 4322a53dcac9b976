use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One dimension of a fitted model: the sorted training sample and its
/// skewness coefficient.
///
/// Both tail CDFs are read off the same sorted copy. The right tail is the
/// left-tail ECDF of the negated sample evaluated at `-x`, which is the
/// count of samples `>= x`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalModel {
    sorted_samples: Vec<f64>,
    skew: f64,
}

/// Sorts a copy of `column` and computes its skewness.
///
/// A single observation is treated like a constant column (skew 0).
pub fn fit_marginal(column: &[f64]) -> Result<MarginalModel> {
    if column.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(row) = column.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row, column: 0 });
    }
    let mut sorted_samples = column.to_vec();
    sorted_samples.sort_unstable_by(f64::total_cmp);
    let skew = if column.len() < 2 {
        0.0
    } else {
        skewness_sorted(&sorted_samples)
    };
    Ok(MarginalModel {
        sorted_samples,
        skew,
    })
}

/// Sample skewness: the `1/n` third central moment over the cube of the
/// `1/(n-1)` standard deviation. Zero-variance columns give 0.
///
/// The result does not depend on the order of `column`, and negating the
/// column negates the result exactly.
pub fn skewness(column: &[f64]) -> Result<f64> {
    let n = column.len();
    if n < 2 {
        return Err(Error::TooFewObservations { needed: 2, found: n });
    }
    if let Some(row) = column.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row, column: 0 });
    }
    let mut sorted = column.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(skewness_sorted(&sorted))
}

// Adds f(s[i]) + f(s[n-1-i]) pairwise from the outside in, so reversing and
// negating `sorted` negates the sum of an odd `f` bit for bit.
fn mirrored_sum(sorted: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len();
    let mut acc = 0.0;
    for i in 0..n / 2 {
        acc += f(sorted[i]) + f(sorted[n - 1 - i]);
    }
    if n % 2 == 1 {
        acc += f(sorted[n / 2]);
    }
    acc
}

fn skewness_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if sorted[0] == sorted[n - 1] {
        return 0.0;
    }
    let nf = n as f64;
    let mean = mirrored_sum(sorted, |v| v) / nf;
    let m2 = mirrored_sum(sorted, |v| (v - mean) * (v - mean));
    let m3 = mirrored_sum(sorted, |v| {
        let dev = v - mean;
        dev * dev * dev
    });
    let sd = libm::sqrt(m2 / (nf - 1.0));
    let denom = sd * sd * sd;
    if denom == 0.0 {
        return 0.0;
    }
    (m3 / nf) / denom
}

impl MarginalModel {
    /// Rebuilds a marginal from stored parts, checking the invariants.
    pub fn from_parts(sorted_samples: Vec<f64>, skew: f64) -> Result<Self> {
        if sorted_samples.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(row) = sorted_samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row, column: 0 });
        }
        if sorted_samples.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::UnsortedSamples { dimension: 0 });
        }
        if !skew.is_finite() {
            return Err(Error::InvalidSkew {
                dimension: 0,
                value: skew,
            });
        }
        Ok(Self {
            sorted_samples,
            skew,
        })
    }

    pub fn n(&self) -> usize {
        self.sorted_samples.len()
    }

    pub fn sorted_samples(&self) -> &[f64] {
        &self.sorted_samples
    }

    pub fn skew(&self) -> f64 {
        self.skew
    }

    /// Number of samples `<= x`.
    pub fn count_le(&self, x: f64) -> usize {
        self.sorted_samples.partition_point(|&s| s <= x)
    }

    /// Number of samples `>= x`.
    pub fn count_ge(&self, x: f64) -> usize {
        self.n() - self.sorted_samples.partition_point(|&s| s < x)
    }

    /// Left-tail ECDF, `P(X <= x)`.
    pub fn left_tail(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.n() as f64
    }

    /// Right-tail ECDF, `P(X >= x)`.
    pub fn right_tail(&self, x: f64) -> f64 {
        self.count_ge(x) as f64 / self.n() as f64
    }
}
