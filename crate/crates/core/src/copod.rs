use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dataset::Dataset;
use crate::ecdf::{fit_marginal, MarginalModel};
use crate::error::{Error, Result};

/// Version tag written into serialized model documents.
pub const FORMAT_VERSION: u32 = 1;

/// Which aggregate of the tail probabilities is reported as the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// `p_l`, left tails only.
    Left,
    /// `p_r`, right tails only.
    Right,
    /// `(p_l + p_r) / 2`.
    TwoTails,
    /// `p_s`, the tail picked per dimension by the sign of its skewness.
    SkewCorrected,
    /// `max(p_l, p_r, p_s)`, the full detector.
    Max,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Left,
        Variant::Right,
        Variant::TwoTails,
        Variant::SkewCorrected,
        Variant::Max,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Left => "left",
            Variant::Right => "right",
            Variant::TwoTails => "two_tails",
            Variant::SkewCorrected => "skew_corrected",
            Variant::Max => "max",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "left" | "l" => Ok(Variant::Left),
            "right" | "r" => Ok(Variant::Right),
            "two_tails" | "two-tails" | "two" => Ok(Variant::TwoTails),
            "skew_corrected" | "skew-corrected" | "sc" | "skew" => Ok(Variant::SkewCorrected),
            "max" => Ok(Variant::Max),
            _ => Err(Error::UnknownVariant(s.to_string())),
        }
    }
}

/// Clamped per-dimension tail probabilities of one point.
#[derive(Debug, Clone, PartialEq)]
pub struct CopulaObservations {
    /// Left tail, `F_j(x_j)`.
    pub u: Vec<f64>,
    /// Right tail, `1 - F_j(x_j)` counted inclusively.
    pub v: Vec<f64>,
    /// `u_j` where the dimension skews negatively, `v_j` otherwise.
    pub w: Vec<f64>,
}

/// Which term produced [`ScoreBreakdown::score`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreComponent {
    Left,
    Right,
    SkewCorrected,
    TwoTailMean,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreBreakdown {
    pub p_l: f64,
    pub p_r: f64,
    pub p_s: f64,
    pub score: f64,
    pub source: ScoreComponent,
}

impl ScoreBreakdown {
    fn new(p_l: f64, p_r: f64, p_s: f64, variant: Variant) -> Self {
        let (score, source) = match variant {
            Variant::Left => (p_l, ScoreComponent::Left),
            Variant::Right => (p_r, ScoreComponent::Right),
            Variant::TwoTails => (0.5 * (p_l + p_r), ScoreComponent::TwoTailMean),
            Variant::SkewCorrected => (p_s, ScoreComponent::SkewCorrected),
            Variant::Max => {
                // ties go to the earlier term
                let mut best = (p_l, ScoreComponent::Left);
                if p_r > best.0 {
                    best = (p_r, ScoreComponent::Right);
                }
                if p_s > best.0 {
                    best = (p_s, ScoreComponent::SkewCorrected);
                }
                best
            }
        };
        Self {
            p_l,
            p_r,
            p_s,
            score,
            source,
        }
    }
}

/// Per-dimension outlier scores of one point with percentile bands taken
/// over a reference set of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionalScores {
    pub per_dim: Vec<f64>,
    pub band_99: Vec<f64>,
    pub band_contamination: Vec<f64>,
    pub contamination: f64,
}

impl DimensionalScores {
    /// Dimensions whose score reaches the 99th-percentile band.
    pub fn exceeds_99(&self) -> Vec<bool> {
        self.per_dim
            .iter()
            .zip(&self.band_99)
            .map(|(o, b)| o >= b)
            .collect()
    }

    pub fn exceeds_contamination(&self) -> Vec<bool> {
        self.per_dim
            .iter()
            .zip(&self.band_contamination)
            .map(|(o, b)| o >= b)
            .collect()
    }
}

/// Nearest-rank percentile of an ascending slice, `pct` in `[0, 100]`.
///
/// Returns the value at rank `ceil(pct / 100 * len)`, clamped to `[1, len]`.
pub fn nearest_rank_percentile(sorted: &[f64], pct: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let len = sorted.len();
    let q = pct * len as f64 / 100.0;
    let nearest = libm::round(q);
    // absorb representation error such as 0.99 * 100 = 98.99999...
    let rank = if libm::fabs(q - nearest) <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        libm::ceil(q)
    };
    let rank = (rank as usize).clamp(1, len);
    sorted[rank - 1]
}

/// A fitted detector: one [`MarginalModel`] per dimension.
///
/// Immutable after fitting; every query method takes `&self`.
#[derive(Debug, Clone, PartialEq)]
pub struct CopodModel {
    marginals: Vec<MarginalModel>,
    n: usize,
    column_names: Vec<String>,
}

impl CopodModel {
    /// Fits the empirical marginals and skewness of every column.
    pub fn fit(train: &Dataset) -> Result<Self> {
        if train.n() < 2 {
            return Err(Error::TooFewObservations {
                needed: 2,
                found: train.n(),
            });
        }
        let mut column = Vec::with_capacity(train.n());
        let mut marginals = Vec::with_capacity(train.d());
        for j in 0..train.d() {
            column.clear();
            column.extend(train.column(j));
            let m = fit_marginal(&column).map_err(|e| match e {
                Error::NonFinite { row, .. } => Error::NonFinite { row, column: j },
                other => other,
            })?;
            marginals.push(m);
        }
        Ok(Self {
            marginals,
            n: train.n(),
            column_names: train.column_names().to_vec(),
        })
    }

    /// Reassembles a model from deserialized parts.
    pub fn from_parts(
        n: usize,
        column_names: Vec<String>,
        marginals: Vec<MarginalModel>,
    ) -> Result<Self> {
        if marginals.is_empty() {
            return Err(Error::Empty);
        }
        if n < 2 {
            return Err(Error::TooFewObservations { needed: 2, found: n });
        }
        if column_names.len() != marginals.len() {
            return Err(Error::ColumnNames {
                expected: marginals.len(),
                found: column_names.len(),
            });
        }
        if let Some((dimension, m)) = marginals.iter().enumerate().find(|(_, m)| m.n() != n) {
            return Err(Error::SampleCount {
                dimension,
                expected: n,
                found: m.n(),
            });
        }
        Ok(Self {
            marginals,
            n,
            column_names,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.marginals.len()
    }

    pub fn marginals(&self) -> &[MarginalModel] {
        &self.marginals
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    /// Smallest probability fed to the logarithm, `1 / (n + 1)`.
    pub fn probability_floor(&self) -> f64 {
        1.0 / (self.n as f64 + 1.0)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                found,
            });
        }
        Ok(())
    }

    #[inline]
    fn tails(&self, j: usize, x: f64, floor: f64) -> (f64, f64, f64) {
        let m = &self.marginals[j];
        let u = m.left_tail(x).max(floor);
        let v = m.right_tail(x).max(floor);
        let w = if m.skew() < 0.0 { u } else { v };
        (u, v, w)
    }

    pub fn copula_observations(&self, x: &[f64]) -> Result<CopulaObservations> {
        self.check_dim(x.len())?;
        let floor = self.probability_floor();
        let d = self.d();
        let mut obs = CopulaObservations {
            u: Vec::with_capacity(d),
            v: Vec::with_capacity(d),
            w: Vec::with_capacity(d),
        };
        for (j, &xj) in x.iter().enumerate() {
            let (u, v, w) = self.tails(j, xj, floor);
            obs.u.push(u);
            obs.v.push(v);
            obs.w.push(w);
        }
        Ok(obs)
    }

    fn breakdown_unchecked(&self, x: &[f64], variant: Variant) -> ScoreBreakdown {
        let floor = self.probability_floor();
        let (mut p_l, mut p_r, mut p_s) = (0.0, 0.0, 0.0);
        for (j, &xj) in x.iter().enumerate() {
            let (u, v, w) = self.tails(j, xj, floor);
            p_l += -libm::log(u);
            p_r += -libm::log(v);
            p_s += -libm::log(w);
        }
        ScoreBreakdown::new(p_l, p_r, p_s, variant)
    }

    pub fn score_one(&self, x: &[f64], variant: Variant) -> Result<ScoreBreakdown> {
        self.check_dim(x.len())?;
        Ok(self.breakdown_unchecked(x, variant))
    }

    pub fn breakdowns(&self, data: &Dataset, variant: Variant) -> Result<Vec<ScoreBreakdown>> {
        self.check_dim(data.d())?;
        Ok(data
            .rows()
            .map(|x| self.breakdown_unchecked(x, variant))
            .collect())
    }

    /// Scores every row of `data`, in row order.
    pub fn score(&self, data: &Dataset, variant: Variant) -> Result<Vec<f64>> {
        self.check_dim(data.d())?;
        Ok(data
            .rows()
            .map(|x| self.breakdown_unchecked(x, variant).score)
            .collect())
    }

    /// `O_j(x) = max(-ln u_j, -ln v_j, -ln w_j)` for every dimension.
    pub fn dimensional_scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x.len())?;
        let floor = self.probability_floor();
        Ok(x.iter()
            .enumerate()
            .map(|(j, &xj)| {
                let (u, v, w) = self.tails(j, xj, floor);
                (-libm::log(u)).max(-libm::log(v)).max(-libm::log(w))
            })
            .collect())
    }

    /// Dimensional outlier scores of `x` against percentile bands of the
    /// same scores over every row of `reference`.
    pub fn explain(
        &self,
        x: &[f64],
        reference: &Dataset,
        contamination: f64,
    ) -> Result<DimensionalScores> {
        if !(contamination > 0.0 && contamination < 1.0) {
            return Err(Error::InvalidContamination(contamination));
        }
        self.check_dim(reference.d())?;
        let per_dim = self.dimensional_scores(x)?;

        let d = self.d();
        let mut by_dim: Vec<Vec<f64>> = (0..d).map(|_| Vec::with_capacity(reference.n())).collect();
        for row in reference.rows() {
            for (j, o) in self.dimensional_scores(row)?.into_iter().enumerate() {
                by_dim[j].push(o);
            }
        }
        let contamination_pct = (1.0 - contamination) * 100.0;
        let mut band_99 = Vec::with_capacity(d);
        let mut band_contamination = Vec::with_capacity(d);
        for scores in &mut by_dim {
            scores.sort_unstable_by(f64::total_cmp);
            band_99.push(nearest_rank_percentile(scores, 99.0));
            band_contamination.push(nearest_rank_percentile(scores, contamination_pct));
        }
        Ok(DimensionalScores {
            per_dim,
            band_99,
            band_contamination,
            contamination,
        })
    }
}
