use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("input is empty")]
    Empty,
    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },
    #[error("row {row} has {found} values, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} column names, got {found}")]
    ColumnNames { expected: usize, found: usize },
    #[error("expected {expected} labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("label {value} at row {row} is not 0 or 1")]
    InvalidLabel { row: usize, value: u8 },
    #[error("need at least {needed} observations, got {found}")]
    TooFewObservations { needed: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("train fraction {0} is not in (0, 1)")]
    InvalidFraction(f64),
    #[error("split of {n} rows gives {train} train and {test} test rows; both must be non-empty")]
    EmptyPartition { n: usize, train: usize, test: usize },
    #[error("contamination {0} is not in (0, 1)")]
    InvalidContamination(f64),
    #[error("scores and labels have different lengths ({scores} vs {labels})")]
    LengthMismatch { scores: usize, labels: usize },
    #[error("both classes must be present (positives: {positives}, negatives: {negatives})")]
    SingleClass { positives: usize, negatives: usize },
    #[error("dataset has no labels")]
    MissingLabels,
    #[error("samples of dimension {dimension} are not in ascending order")]
    UnsortedSamples { dimension: usize },
    #[error("dimension {dimension} has {found} samples, expected {expected}")]
    SampleCount {
        dimension: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid skewness {value} for dimension {dimension}")]
    InvalidSkew { dimension: usize, value: f64 },
    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
    #[error("row index {index} out of range for {n} rows")]
    RowOutOfRange { index: usize, n: usize },
}
