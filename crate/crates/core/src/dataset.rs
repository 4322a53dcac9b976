use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const DEFAULT_TRAIN_FRACTION: f64 = 0.6;

/// An `n x d` matrix of finite reals, stored row-major, with optional
/// binary outlier labels (1 = outlier).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    n: usize,
    d: usize,
    labels: Option<Vec<u8>>,
    column_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from row-major values.
    ///
    /// When `column_names` is `None` the columns are named `x0, x1, ...`.
    pub fn from_flat(
        values: Vec<f64>,
        d: usize,
        column_names: Option<Vec<String>>,
        labels: Option<Vec<u8>>,
    ) -> Result<Self> {
        if d == 0 || values.is_empty() {
            return Err(Error::Empty);
        }
        if !values.len().is_multiple_of(d) {
            let n = values.len() / d;
            return Err(Error::RaggedRow {
                row: n,
                expected: d,
                found: values.len() % d,
            });
        }
        let n = values.len() / d;
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / d,
                column: pos % d,
            });
        }
        let column_names = match column_names {
            Some(names) if names.len() != d => {
                return Err(Error::ColumnNames {
                    expected: d,
                    found: names.len(),
                })
            }
            Some(names) => names,
            None => (0..d).map(|j| format!("x{j}")).collect(),
        };
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::LabelCount {
                    expected: n,
                    found: labels.len(),
                });
            }
            if let Some(row) = labels.iter().position(|&l| l > 1) {
                return Err(Error::InvalidLabel {
                    row,
                    value: labels[row],
                });
            }
        }
        Ok(Self {
            values,
            n,
            d,
            labels,
            column_names,
        })
    }

    pub fn from_rows(
        rows: Vec<Vec<f64>>,
        column_names: Option<Vec<String>>,
        labels: Option<Vec<u8>>,
    ) -> Result<Self> {
        let d = rows.first().map(Vec::len).ok_or(Error::Empty)?;
        let mut values = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != d {
                return Err(Error::RaggedRow {
                    row: i,
                    expected: d,
                    found: row.len(),
                });
            }
            values.extend(row);
        }
        Self::from_flat(values, d, column_names, labels)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.d)
    }

    pub fn column(&self, j: usize) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.values.iter().skip(j).step_by(self.d).copied()
    }

    pub fn labels(&self) -> Option<&[u8]> {
        self.labels.as_deref()
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    /// Returns the labels, or [`Error::MissingLabels`].
    pub fn require_labels(&self) -> Result<&[u8]> {
        self.labels().ok_or(Error::MissingLabels)
    }

    pub fn without_labels(&self) -> Self {
        Self {
            labels: None,
            ..self.clone()
        }
    }

    /// Copies the given rows, in the given order, into a new dataset.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            if i >= self.n {
                return Err(Error::RowOutOfRange {
                    index: i,
                    n: self.n,
                });
            }
            values.extend_from_slice(self.row(i));
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i]).collect());
        Self::from_flat(values, self.d, Some(self.column_names.clone()), labels)
    }

    /// Applies `f` to every value of column `j`, keeping everything else.
    pub fn map_column(&self, j: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut values = self.values.clone();
        for v in values.iter_mut().skip(j).step_by(self.d) {
            *v = f(*v);
        }
        Self::from_flat(
            values,
            self.d,
            Some(self.column_names.clone()),
            self.labels.clone(),
        )
    }
}

/// How to partition a dataset into train and test rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitPlan {
    pub train_fraction: f64,
    pub seed: u64,
}

impl SplitPlan {
    pub fn new(train_fraction: f64, seed: u64) -> Self {
        Self {
            train_fraction,
            seed,
        }
    }

    /// Train size: `train_fraction * n` rounded half-up.
    pub fn train_size(&self, n: usize) -> Result<usize> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidFraction(self.train_fraction));
        }
        let train = libm::floor(self.train_fraction * n as f64 + 0.5) as usize;
        if train == 0 || train >= n {
            return Err(Error::EmptyPartition {
                n,
                train,
                test: n.saturating_sub(train),
            });
        }
        Ok(train)
    }
}

impl Default for SplitPlan {
    fn default() -> Self {
        Self::new(DEFAULT_TRAIN_FRACTION, 0)
    }
}

/// Seeded, unstratified random partition into `(train, test)`.
///
/// A uniform permutation of the row indices is drawn from a ChaCha8 stream
/// seeded with `plan.seed`; the first `train_size` indices form the train
/// part. Each part keeps the original relative row order.
pub fn split(ds: &Dataset, plan: &SplitPlan) -> Result<(Dataset, Dataset)> {
    if ds.n() < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            found: ds.n(),
        });
    }
    let train_n = plan.train_size(ds.n())?;
    let mut order: Vec<usize> = (0..ds.n()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    order.shuffle(&mut rng);
    let (train_idx, test_idx) = order.split_at_mut(train_n);
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((ds.select_rows(train_idx)?, ds.select_rows(test_idx)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ten_rows() -> Dataset {
        let rows = (0..10).map(|i| vec![i as f64, -(i as f64)]).collect();
        let labels = (0..10).map(|i| (i % 3 == 0) as u8).collect();
        Dataset::from_rows(rows, None, Some(labels)).unwrap()
    }

    #[test]
    fn rejects_non_finite() {
        let err = Dataset::from_rows(vec![vec![1.0, f64::NAN]], None, None).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, column: 1 });
        let err = Dataset::from_rows(vec![vec![f64::INFINITY]], None, None).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, column: 0 });
    }

    #[test]
    fn rejects_ragged_and_bad_labels() {
        let err = Dataset::from_rows(vec![vec![1.0, 2.0], vec![3.0]], None, None).unwrap_err();
        assert!(matches!(err, Error::RaggedRow { row: 1, .. }));
        let err = Dataset::from_rows(vec![vec![1.0]], None, Some(vec![2])).unwrap_err();
        assert!(matches!(err, Error::InvalidLabel { row: 0, value: 2 }));
        let err = Dataset::from_rows(vec![vec![1.0]], None, Some(vec![0, 1])).unwrap_err();
        assert!(matches!(err, Error::LabelCount { .. }));
        assert_eq!(Dataset::from_rows(vec![], None, None), Err(Error::Empty));
    }

    #[test]
    fn split_sizes() {
        let ds = ten_rows();
        let (train, test) = split(&ds, &SplitPlan::new(0.6, 3)).unwrap();
        assert_eq!((train.n(), test.n()), (6, 4));
        // round half up: 0.25 * 10 = 2.5 -> 3
        let (train, _) = split(&ds, &SplitPlan::new(0.25, 3)).unwrap();
        assert_eq!(train.n(), 3);
    }

    #[test]
    fn split_is_deterministic_and_consistent() {
        let ds = ten_rows();
        let plan = SplitPlan::new(0.6, 11);
        assert_eq!(split(&ds, &plan).unwrap(), split(&ds, &plan).unwrap());
        let (train, test) = split(&ds, &plan).unwrap();
        for part in [&train, &test] {
            for (row, &label) in part.rows().zip(part.labels().unwrap()) {
                let i = row[0] as usize;
                assert_eq!(label, (i % 3 == 0) as u8);
            }
        }
    }

    #[test]
    fn split_errors() {
        let ds = ten_rows();
        assert!(matches!(
            split(&ds, &SplitPlan::new(0.01, 0)),
            Err(Error::EmptyPartition { .. })
        ));
        assert!(matches!(
            split(&ds, &SplitPlan::new(0.99, 0)),
            Err(Error::EmptyPartition { .. })
        ));
        assert!(matches!(
            split(&ds, &SplitPlan::new(1.0, 0)),
            Err(Error::InvalidFraction(_))
        ));
        let one = Dataset::from_rows(vec![vec![1.0]], None, None).unwrap();
        assert!(matches!(
            split(&one, &SplitPlan::default()),
            Err(Error::TooFewObservations { .. })
        ));
    }

    #[test]
    fn map_column_touches_one_column() {
        let ds = ten_rows();
        let mapped = ds.map_column(1, |v| v * 2.0).unwrap();
        assert_eq!(mapped.row(3), &[3.0, -6.0]);
        assert_eq!(mapped.labels(), ds.labels());
    }
}
