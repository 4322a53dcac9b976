//! Files, experiments and the command line around [`copod_core`].
//!
//! * [`csv_io`] and [`arff`] load labelled datasets.
//! * [`model_file`] stores fitted models as JSON documents.
//! * [`bench`] runs the multi-trial evaluation, the toy study and timing grids.
//! * [`report`] writes score tables, explanation TSVs and SVG charts.
//! * [`cli`] is the `copod` binary.

pub mod arff;
pub mod bench;
pub mod cli;
pub mod csv_io;
pub mod error;
pub mod model_file;
pub mod report;

pub use copod_core;
pub use error::{Error, Result};

use copod_core::{CopodModel, Dataset, Variant};
use rayon::prelude::*;

/// Scores rows on the rayon pool. Output order and values match
/// [`CopodModel::score`] exactly.
pub fn score_parallel(model: &CopodModel, data: &Dataset, variant: Variant) -> copod_core::Result<Vec<f64>> {
    if data.d() != model.d() {
        return Err(copod_core::Error::DimensionMismatch {
            expected: model.d(),
            found: data.d(),
        });
    }
    data.rows()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|x| model.score_one(x, variant).map(|b| b.score))
        .collect()
}
