//! Copula-based outlier detection.
//!
//! Each dimension of a training sample is summarised by its empirical CDF
//! and its sample skewness. A query point is turned into per-dimension
//! left, right and skewness-corrected tail probabilities, and the outlier
//! score is the largest of the summed negative log probabilities. Scores
//! are comparative: larger means more anomalous.
//!
//! The crate is `no_std` and only needs an allocator. File formats, the
//! CLI and the benchmark harness live in the `copod` crate.
//!
//! ```
//! use copod_core::{CopodModel, Dataset, Variant};
//!
//! let train = Dataset::from_rows(vec![vec![1.0], vec![2.0], vec![3.0]], None, None).unwrap();
//! let model = CopodModel::fit(&train).unwrap();
//! let s = model.score_one(&[2.0], Variant::Max).unwrap();
//! assert!((s.score - 1.5f64.ln()).abs() < 1e-12);
//! ```
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod copod;
mod dataset;
mod ecdf;
mod error;
mod metrics;
mod synth;

pub use copod::{
    nearest_rank_percentile, CopodModel, CopulaObservations, DimensionalScores, ScoreBreakdown,
    ScoreComponent, Variant, FORMAT_VERSION,
};
pub use dataset::{split, Dataset, SplitPlan, DEFAULT_TRAIN_FRACTION};
pub use ecdf::{fit_marginal, skewness, MarginalModel};
pub use error::{Error, Result};
pub use metrics::{average_precision, evaluate, roc_auc, MetricReport};
pub use synth::{gen_random, gen_toy, Orientation, ToySpec};
