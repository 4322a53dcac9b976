//! Evaluation harness: repeated random train/test splits, the toy tail
//! study, and fit+score timing grids.

use std::io::{self, Write};
use std::time::Instant;

use copod_core::{
    evaluate, gen_random, gen_toy, roc_auc, split, CopodModel, Dataset, MetricReport,
    Orientation, SplitPlan, ToySpec, Variant, DEFAULT_TRAIN_FRACTION,
};
use rayon::prelude::*;

use crate::csv_io::fmt_f64;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub trials: usize,
    pub train_fraction: f64,
    /// Trial `t` splits with seed `base_seed + t`.
    pub base_seed: u64,
    pub variants: Vec<Variant>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            trials: 10,
            train_fraction: DEFAULT_TRAIN_FRACTION,
            base_seed: 0,
            variants: Variant::ALL.to_vec(),
        }
    }
}

impl TrialConfig {
    pub fn seed(&self, trial: usize) -> u64 {
        self.base_seed.wrapping_add(trial as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    /// `None` when the test split held a single class.
    pub metrics: Option<MetricReport>,
    pub fit_seconds: f64,
    pub score_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub dataset: String,
    pub variant: Variant,
    pub mean_roc_auc: f64,
    pub mean_ap: f64,
    pub trials: Vec<TrialRecord>,
    pub invalid_trials: usize,
    pub wall_time_seconds: f64,
}

impl BenchRow {
    pub fn valid_trials(&self) -> usize {
        self.trials.len() - self.invalid_trials
    }

    /// Same row with timings zeroed, for comparing reruns.
    pub fn without_timings(&self) -> Self {
        let mut row = self.clone();
        row.wall_time_seconds = 0.0;
        for t in &mut row.trials {
            t.fit_seconds = 0.0;
            t.score_seconds = 0.0;
        }
        row
    }
}

struct TrialOutcome {
    fit_seconds: f64,
    per_variant: Vec<(Option<MetricReport>, f64)>,
}

fn run_trial(data: &Dataset, plan: &SplitPlan, variants: &[Variant]) -> copod_core::Result<TrialOutcome> {
    let (train, test) = split(data, plan)?;
    let start = Instant::now();
    let model = CopodModel::fit(&train)?;
    let fit_seconds = start.elapsed().as_secs_f64();
    let test_labels = test.labels().expect("labels were checked");
    let mut per_variant = Vec::with_capacity(variants.len());
    for &variant in variants {
        let start = Instant::now();
        let scores = model.score(&test, variant)?;
        let score_seconds = start.elapsed().as_secs_f64();
        let metrics = match evaluate(&scores, test_labels) {
            Ok(m) => Some(m),
            Err(copod_core::Error::SingleClass { .. }) => None,
            Err(e) => return Err(e),
        };
        per_variant.push((metrics, score_seconds));
    }
    Ok(TrialOutcome {
        fit_seconds,
        per_variant,
    })
}

/// Runs `config.trials` split/fit/score/evaluate rounds per dataset.
///
/// Trials run on the current rayon pool; results are collected in trial
/// order, so the table does not depend on the number of threads. Trials
/// whose test split lacks a class are counted in `invalid_trials` and left
/// out of the means.
pub fn run_benchmark(datasets: &[(String, Dataset)], config: &TrialConfig) -> Result<Vec<BenchRow>> {
    if config.trials == 0 || config.variants.is_empty() {
        return Err(Error::Usage("benchmark needs at least one trial and one variant".into()));
    }
    let mut rows = Vec::new();
    for (name, data) in datasets {
        let labels = data.require_labels().map_err(|e| Error::data(name, e))?;
        let positives = labels.iter().filter(|&&l| l == 1).count();
        if positives == 0 || positives == labels.len() {
            return Err(Error::data(
                name,
                copod_core::Error::SingleClass {
                    positives,
                    negatives: labels.len() - positives,
                },
            ));
        }
        let started = Instant::now();
        let outcomes = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let plan = SplitPlan::new(config.train_fraction, config.seed(t));
                run_trial(data, &plan, &config.variants)
            })
            .collect::<copod_core::Result<Vec<_>>>()
            .map_err(|e| Error::data(name, e))?;
        let wall_time_seconds = started.elapsed().as_secs_f64();

        for (k, &variant) in config.variants.iter().enumerate() {
            let trials: Vec<TrialRecord> = outcomes
                .iter()
                .enumerate()
                .map(|(t, o)| TrialRecord {
                    trial: t,
                    seed: config.seed(t),
                    metrics: o.per_variant[k].0,
                    fit_seconds: o.fit_seconds,
                    score_seconds: o.per_variant[k].1,
                })
                .collect();
            let valid: Vec<&MetricReport> = trials.iter().filter_map(|t| t.metrics.as_ref()).collect();
            let mean = |f: fn(&MetricReport) -> f64| {
                if valid.is_empty() {
                    f64::NAN
                } else {
                    valid.iter().map(|m| f(m)).sum::<f64>() / valid.len() as f64
                }
            };
            rows.push(BenchRow {
                dataset: name.clone(),
                variant,
                mean_roc_auc: mean(|m| m.roc_auc),
                mean_ap: mean(|m| m.average_precision),
                invalid_trials: trials.len() - valid.len(),
                trials,
                wall_time_seconds,
            });
        }
    }
    Ok(rows)
}

fn opt_cell(value: Option<f64>) -> String {
    value.map(fmt_f64).unwrap_or_default()
}

/// Per-trial CSV. Timing columns are left empty unless `with_timing`,
/// which keeps the file reproducible byte for byte.
pub fn write_trials_csv(rows: &[BenchRow], mut out: impl Write, with_timing: bool) -> io::Result<()> {
    writeln!(out, "dataset,variant,trial,seed,roc_auc,ap,fit_seconds,score_seconds")?;
    for row in rows {
        for t in &row.trials {
            let (fit, score) = if with_timing {
                (fmt_f64(t.fit_seconds), fmt_f64(t.score_seconds))
            } else {
                Default::default()
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                row.dataset,
                row.variant,
                t.trial,
                t.seed,
                opt_cell(t.metrics.map(|m| m.roc_auc)),
                opt_cell(t.metrics.map(|m| m.average_precision)),
                fit,
                score
            )?;
        }
    }
    out.flush()
}

pub fn write_aggregate_csv(rows: &[BenchRow], mut out: impl Write, with_timing: bool) -> io::Result<()> {
    writeln!(out, "dataset,variant,mean_roc_auc,mean_ap,valid_trials,invalid_trials,wall_time_seconds")?;
    for row in rows {
        let wall = if with_timing { fmt_f64(row.wall_time_seconds) } else { String::new() };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.dataset,
            row.variant,
            fmt_f64(row.mean_roc_auc),
            fmt_f64(row.mean_ap),
            row.valid_trials(),
            row.invalid_trials,
            wall
        )?;
    }
    out.flush()
}

/// Fits on the whole dataset and scores it in place, returning ROC-AUC.
pub fn in_sample_auc(data: &Dataset, variant: Variant) -> Result<f64> {
    let labels = data.require_labels().map_err(|e| Error::data("in-sample", e))?;
    let model = CopodModel::fit(data).map_err(|e| Error::data("in-sample", e))?;
    let scores = model.score(data, variant).map_err(|e| Error::data("in-sample", e))?;
    roc_auc(&scores, labels).map_err(|e| Error::data("in-sample", e))
}

/// Mean in-sample ROC-AUC per variant over toy datasets with the given seeds.
pub fn toy_study(orientation: Orientation, seeds: impl IntoIterator<Item = u64>, variants: &[Variant]) -> Result<Vec<(Variant, f64)>> {
    let mut sums = vec![0.0; variants.len()];
    let mut count = 0usize;
    for seed in seeds {
        let data = gen_toy(&ToySpec {
            orientation,
            seed,
            ..Default::default()
        })
        .map_err(|e| Error::data("toy", e))?;
        for (k, &v) in variants.iter().enumerate() {
            sums[k] += in_sample_auc(&data, v)?;
        }
        count += 1;
    }
    Ok(variants
        .iter()
        .zip(sums)
        .map(|(&v, s)| (v, s / count as f64))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRecord {
    pub n: usize,
    pub d: usize,
    /// Wall time of fit plus in-sample scoring, one entry per repeat.
    pub seconds: Vec<f64>,
}

impl TimingRecord {
    pub fn mean(&self) -> f64 {
        self.seconds.iter().sum::<f64>() / self.seconds.len() as f64
    }

    /// Coefficient of variation across repeats (0 for a single repeat).
    pub fn cv(&self) -> f64 {
        let k = self.seconds.len();
        if k < 2 {
            return 0.0;
        }
        let mean = self.mean();
        let var = self.seconds.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
        var.sqrt() / mean
    }
}

/// Times fit and in-sample scoring (variant `max`) on standard-normal
/// data for every `(n, d)` cell, on the calling thread only.
pub fn time_scaling(grid: &[(usize, usize)], seed: u64, repeats: usize) -> Result<Vec<TimingRecord>> {
    if grid.is_empty() || repeats == 0 {
        return Err(Error::Usage("timing grid and repeats must be non-empty".into()));
    }
    grid.iter()
        .map(|&(n, d)| {
            let data = gen_random(n, d, seed).map_err(|e| Error::data(format!("random {n}x{d}"), e))?;
            let seconds = (0..repeats)
                .map(|_| {
                    let start = Instant::now();
                    let model = CopodModel::fit(&data)?;
                    let scores = model.score(&data, Variant::Max)?;
                    std::hint::black_box(scores);
                    Ok(start.elapsed().as_secs_f64())
                })
                .collect::<copod_core::Result<Vec<_>>>()
                .map_err(|e| Error::data(format!("random {n}x{d}"), e))?;
            Ok(TimingRecord { n, d, seconds })
        })
        .collect()
}

/// Least-squares slope of `ln(y)` against `ln(x)`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Mean seconds laid out with one row per `n` and one column per `d`.
/// Cells missing from the grid are left empty.
pub fn write_timing_table(records: &[TimingRecord], mut out: impl Write) -> io::Result<()> {
    let mut ns: Vec<usize> = records.iter().map(|r| r.n).collect();
    let mut ds: Vec<usize> = records.iter().map(|r| r.d).collect();
    ns.sort_unstable();
    ns.dedup();
    ds.sort_unstable();
    ds.dedup();
    let header: Vec<String> = ds.iter().map(|d| format!("d={d}")).collect();
    writeln!(out, "n,{}", header.join(","))?;
    for n in ns {
        let cells: Vec<String> = ds
            .iter()
            .map(|&d| {
                records
                    .iter()
                    .find(|r| r.n == n && r.d == d)
                    .map(|r| format!("{:.4}", r.mean()))
                    .unwrap_or_default()
            })
            .collect();
        writeln!(out, "{n},{}", cells.join(","))?;
    }
    out.flush()
}

pub fn write_timing_records(records: &[TimingRecord], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "n,d,repeats,mean_seconds,cv")?;
    for r in records {
        writeln!(out, "{},{},{},{},{}", r.n, r.d, r.seconds.len(), fmt_f64(r.mean()), fmt_f64(r.cv()))?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labelled(n: usize, seed: u64) -> Dataset {
        let base = gen_random(n, 3, seed).unwrap();
        let labels: Vec<u8> = (0..n).map(|i| (i % 5 == 0) as u8).collect();
        let values: Vec<f64> = base
            .rows()
            .zip(&labels)
            .flat_map(|(r, &l)| r.iter().map(move |v| v + 4.0 * f64::from(l)))
            .collect();
        Dataset::from_flat(values, 3, None, Some(labels)).unwrap()
    }

    #[test]
    fn trial_count_and_means() {
        let cfg = TrialConfig {
            trials: 10,
            variants: vec![Variant::SkewCorrected, Variant::Max],
            ..Default::default()
        };
        let rows = run_benchmark(&[("a".into(), labelled(100, 1))], &cfg).unwrap();
        assert_eq!(rows.len(), 2);
        for row in &rows {
            assert_eq!(row.trials.len(), 10);
            assert_eq!(row.invalid_trials, 0);
            let mean = row.trials.iter().map(|t| t.metrics.unwrap().roc_auc).sum::<f64>() / 10.0;
            assert!((mean - row.mean_roc_auc).abs() < 1e-12);
            assert!(row.mean_roc_auc > 0.9);
        }
        assert_eq!(rows[0].trials[3].seed, 3);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let data = vec![("a".to_string(), labelled(80, 2)), ("b".to_string(), labelled(60, 3))];
        let cfg = TrialConfig::default();
        let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let wide = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a: Vec<_> = serial.install(|| run_benchmark(&data, &cfg)).unwrap().iter().map(BenchRow::without_timings).collect();
        let b: Vec<_> = wide.install(|| run_benchmark(&data, &cfg)).unwrap().iter().map(BenchRow::without_timings).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn single_class_test_splits_are_invalid() {
        // one outlier in 20 rows: most test splits of 8 rows miss it
        let mut labels = vec![0u8; 20];
        labels[0] = 1;
        let data = Dataset::from_flat(gen_random(20, 2, 4).unwrap().values().to_vec(), 2, None, Some(labels)).unwrap();
        let rows = run_benchmark(&[("x".into(), data)], &TrialConfig { variants: vec![Variant::Max], ..Default::default() }).unwrap();
        let row = &rows[0];
        assert!(row.invalid_trials > 0);
        assert_eq!(row.trials.iter().filter(|t| t.metrics.is_none()).count(), row.invalid_trials);
    }

    #[test]
    fn unlabelled_dataset_is_rejected() {
        let data = gen_random(20, 2, 4).unwrap();
        let err = run_benchmark(&[("x".into(), data)], &TrialConfig::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(1.2))).collect();
        assert!((loglog_slope(&pts) - 1.2).abs() < 1e-12);
    }

    #[test]
    fn timing_table_layout() {
        let recs = vec![
            TimingRecord { n: 10, d: 2, seconds: vec![0.5, 1.5] },
            TimingRecord { n: 10, d: 4, seconds: vec![2.0] },
            TimingRecord { n: 20, d: 2, seconds: vec![3.0] },
        ];
        let mut buf = Vec::new();
        write_timing_table(&recs, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,d=2,d=4\n10,1.0000,2.0000\n20,3.0000,\n");
        assert!(recs[1].cv() == 0.0 && recs[0].cv() > 0.0);
    }
}
