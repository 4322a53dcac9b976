//! CSV datasets: one header row, decimal reals, optional 0/1 label column.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use copod_core::Dataset;

use crate::error::{Error, Result};

/// Column name used for labels when writing.
pub const LABEL_COLUMN: &str = "label";

/// Formats a float with 17 significant digits, enough to round-trip any
/// `f64` exactly.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0e0"
        return "0".to_string();
    }
    format!("{x:.16e}")
}

pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&str>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, path, label_column)
}

/// Parses CSV from any reader. `source` is only used in error messages.
/// Rows are numbered from 1 (the first data row) in errors.
pub fn read_csv(reader: impl Read, source: &Path, label_column: Option<&str>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::parse(source, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::parse(source, "missing header row"));
    }
    let label_idx = match label_column {
        Some(name) => Some(
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::parse(source, format!("label column `{name}` not in header")))?,
        ),
        None => None,
    };
    let names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != label_idx)
        .map(|(_, h)| h.clone())
        .collect();
    if names.is_empty() {
        return Err(Error::parse(source, "no feature columns"));
    }

    let mut values = Vec::new();
    let mut labels = label_idx.map(|_| Vec::new());
    for (r, record) in rdr.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| Error::parse(source, e.to_string()))?;
        if record.len() != header.len() {
            return Err(Error::parse(
                source,
                format!("row {row} has {} cells, header has {}", record.len(), header.len()),
            ));
        }
        for (c, cell) in record.iter().enumerate() {
            let column = &header[c];
            if cell.is_empty() {
                return Err(Error::parse(
                    source,
                    format!("missing value at row {row}, column `{column}`"),
                ));
            }
            if Some(c) == label_idx {
                let label = match cell.parse::<f64>() {
                    Ok(0.0) => 0,
                    Ok(1.0) => 1,
                    _ => {
                        return Err(Error::parse(
                            source,
                            format!("label `{cell}` at row {row}, column `{column}` is not 0 or 1"),
                        ))
                    }
                };
                labels.as_mut().expect("label column present").push(label);
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::parse(
                        source,
                        format!("non-numeric value `{cell}` at row {row}, column `{column}`"),
                    ))
                }
            }
        }
    }
    if values.is_empty() {
        return Err(Error::data(
            source.display().to_string(),
            copod_core::Error::Empty,
        ));
    }
    let d = names.len();
    Dataset::from_flat(values, d, Some(names), labels)
        .map_err(|e| Error::data(source.display().to_string(), e))
}

/// Writes `ds` with a header; labels, if any, go last in a `label` column.
pub fn write_csv(ds: &Dataset, mut out: impl Write) -> io::Result<()> {
    let mut header = ds.column_names().join(",");
    if ds.labels().is_some() {
        header.push(',');
        header.push_str(LABEL_COLUMN);
    }
    writeln!(out, "{header}")?;
    for (i, row) in ds.rows().enumerate() {
        let mut line = row.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(",");
        if let Some(labels) = ds.labels() {
            line.push(',');
            line.push_str(if labels[i] == 1 { "1" } else { "0" });
        }
        writeln!(out, "{line}")?;
    }
    out.flush()
}

pub fn save_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(ds, io::BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
