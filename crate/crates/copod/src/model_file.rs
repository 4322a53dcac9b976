//! JSON model documents.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "n": 3,
//!   "d": 1,
//!   "column_names": ["x"],
//!   "marginals": [{ "sorted_samples": [1.0, 2.0, 3.0], "skew": 0.0 }]
//! }
//! ```
//!
//! Floats are written in shortest round-trip form, so a save/load cycle
//! reproduces every sample and skew bit for bit.

use std::fs;
use std::path::Path;

use copod_core::{CopodModel, MarginalModel, FORMAT_VERSION};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct MarginalDoc {
    sorted_samples: Vec<f64>,
    skew: f64,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    format_version: u64,
    n: usize,
    d: usize,
    column_names: Vec<String>,
    marginals: Vec<MarginalDoc>,
}

pub fn serialize(model: &CopodModel) -> String {
    let doc = ModelDoc {
        format_version: FORMAT_VERSION.into(),
        n: model.n(),
        d: model.d(),
        column_names: model.column_names().to_vec(),
        marginals: model
            .marginals()
            .iter()
            .map(|m| MarginalDoc {
                sorted_samples: m.sorted_samples().to_vec(),
                skew: m.skew(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("model document serializes");
    text.push('\n');
    text
}

pub fn deserialize(text: &str) -> Result<CopodModel> {
    #[derive(Deserialize)]
    struct Version {
        format_version: u64,
    }
    let version: Version =
        serde_json::from_str(text).map_err(|e| Error::CorruptModel(e.to_string()))?;
    if version.format_version != u64::from(FORMAT_VERSION) {
        return Err(Error::VersionMismatch {
            found: version.format_version,
            expected: FORMAT_VERSION,
        });
    }
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| Error::CorruptModel(e.to_string()))?;
    if doc.d != doc.marginals.len() {
        return Err(Error::CorruptModel(format!(
            "d = {} but {} marginals are stored",
            doc.d,
            doc.marginals.len()
        )));
    }
    let marginals = doc
        .marginals
        .into_iter()
        .enumerate()
        .map(|(j, m)| {
            MarginalModel::from_parts(m.sorted_samples, m.skew).map_err(|e| {
                use copod_core::Error as E;
                let e = match e {
                    E::UnsortedSamples { .. } => E::UnsortedSamples { dimension: j },
                    E::InvalidSkew { value, .. } => E::InvalidSkew { dimension: j, value },
                    other => other,
                };
                Error::CorruptModel(format!("dimension {j}: {e}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CopodModel::from_parts(doc.n, doc.column_names, marginals)
        .map_err(|e| Error::CorruptModel(e.to_string()))
}

pub fn save_model(model: &CopodModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, serialize(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<CopodModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    deserialize(&text)
}
