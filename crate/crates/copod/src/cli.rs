//! The `copod` command line.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use copod_core::{gen_random, gen_toy, CopodModel, Dataset, Orientation, ToySpec, Variant};
use rayon::prelude::*;

use crate::arff::{load_arff, ArffOptions, LabelMapping};
use crate::bench::{self, TrialConfig};
use crate::csv_io::{load_csv, save_csv};
use crate::error::{Error, Result};
use crate::model_file::{load_model, save_model};
use crate::report;

#[derive(Debug, Parser)]
#[command(name = "copod", version, about = "Copula-based outlier detection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model on a CSV file and write the model document.
    Fit(FitArgs),
    /// Score every row of a CSV file with a fitted model.
    Score(ScoreArgs),
    /// Per-dimension scores of one row against percentile bands.
    Explain(ExplainArgs),
    /// Repeated train/test evaluation over a directory of labelled datasets.
    Bench(BenchArgs),
    /// Write a synthetic dataset.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Convert an ARFF file to CSV.
    Convert(ConvertArgs),
    /// Time fit plus in-sample scoring on random data over an (n, d) grid.
    Scaling(ScalingArgs),
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse::<Variant>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long, default_value = "max", value_parser = parse_variant)]
    pub variant: Variant,
    #[arg(long)]
    pub output: PathBuf,
    /// Worker threads for scoring; output does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub label_column: Option<String>,
    /// Zero-based row of `--input` to explain.
    #[arg(long)]
    pub row: usize,
    #[arg(long, default_value_t = 0.1)]
    pub contamination: f64,
    /// Rows whose dimensional scores define the percentile bands.
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Defaults to standard output.
    #[arg(long)]
    pub tsv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of labelled `.csv` (and `.arff`) datasets.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', value_parser = parse_variant,
          default_value = "left,right,two_tails,skew_corrected,max")]
    pub variants: Vec<Variant>,
    #[arg(long, default_value_t = copod_core::DEFAULT_TRAIN_FRACTION)]
    pub train_fraction: f64,
    #[arg(long, default_value = "label")]
    pub label_column: String,
    /// Per-trial results.
    #[arg(long)]
    pub out: PathBuf,
    /// Aggregate means; defaults to `<out>` with an `.aggregate.csv` suffix.
    #[arg(long)]
    pub aggregate: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Fill the timing columns (makes the output run-dependent).
    #[arg(long)]
    pub record_timing: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrientationArg {
    LowerLeft,
    UpperRight,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Two-dimensional toy data with a corner of outliers.
    Toy {
        #[arg(long, default_value_t = 400)]
        n_inliers: usize,
        #[arg(long, default_value_t = 40)]
        n_outliers: usize,
        #[arg(long, value_enum, default_value = "lower-left")]
        orientation: OrientationArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Standard-normal matrix without labels.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub arff: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Nominal value meaning "outlier"; all other values become inliers.
    /// Without it only yes/no vocabularies are accepted.
    #[arg(long)]
    pub outlier_value: Option<String>,
    /// Numeric attribute to leave out (repeatable).
    #[arg(long)]
    pub drop_column: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub d: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    /// Mean seconds, rows n and columns d.
    #[arg(long)]
    pub out: PathBuf,
    /// Long format with repeats and coefficient of variation.
    #[arg(long)]
    pub records: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Usage(e.to_string()))
}

fn context(path: &Path) -> String {
    path.display().to_string()
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Fit(a) => cmd_fit(&a),
        Command::Score(a) => cmd_score(&a),
        Command::Explain(a) => cmd_explain(&a),
        Command::Bench(a) => cmd_bench(&a),
        Command::Gen(g) => cmd_gen(g),
        Command::Convert(a) => cmd_convert(&a),
        Command::Scaling(a) => cmd_scaling(&a),
    }
}

fn cmd_fit(a: &FitArgs) -> Result<()> {
    let data = load_csv(&a.input, a.label_column.as_deref())?;
    let model = CopodModel::fit(&data).map_err(|e| Error::data(context(&a.input), e))?;
    save_model(&model, &a.output)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let _ = writeln!(out, "n = {}, d = {}", model.n(), model.d());
    let _ = writeln!(out, "dimension\tname\tskew");
    for (j, (m, name)) in model.marginals().iter().zip(model.column_names()).enumerate() {
        let _ = writeln!(out, "{}\t{}\t{:.6}", j + 1, name, m.skew());
    }
    Ok(())
}

fn cmd_score(a: &ScoreArgs) -> Result<()> {
    let model = load_model(&a.model)?;
    let data = load_csv(&a.input, a.label_column.as_deref())?;
    let ctx = context(&a.input);
    let breakdowns = if a.jobs > 1 {
        if data.d() != model.d() {
            return Err(Error::data(
                ctx,
                copod_core::Error::DimensionMismatch {
                    expected: model.d(),
                    found: data.d(),
                },
            ));
        }
        let rows: Vec<&[f64]> = data.rows().collect();
        pool(a.jobs)?
            .install(|| {
                rows.par_iter()
                    .map(|x| model.score_one(x, a.variant))
                    .collect::<copod_core::Result<Vec<_>>>()
            })
            .map_err(|e| Error::data(&ctx, e))?
    } else {
        model.breakdowns(&data, a.variant).map_err(|e| Error::data(&ctx, e))?
    };
    report::write_scores_csv(&breakdowns, create(&a.output)?).map_err(|e| Error::io(&a.output, e))
}

fn cmd_explain(a: &ExplainArgs) -> Result<()> {
    let model = load_model(&a.model)?;
    let data = load_csv(&a.input, a.label_column.as_deref())?;
    let reference = load_csv(&a.train, a.label_column.as_deref())?;
    if a.row >= data.n() {
        return Err(Error::data(
            context(&a.input),
            copod_core::Error::RowOutOfRange {
                index: a.row,
                n: data.n(),
            },
        ));
    }
    let scores = model
        .explain(data.row(a.row), &reference, a.contamination)
        .map_err(|e| Error::data(context(&a.input), e))?;
    let names = model.column_names();
    match &a.tsv {
        Some(path) => report::write_explain_tsv(names, &scores, create(path)?).map_err(|e| Error::io(path, e))?,
        None => report::write_explain_tsv(names, &scores, io::stdout().lock()).map_err(|e| Error::io("<stdout>", e))?,
    }
    if let Some(path) = &a.svg {
        let title = format!("Dimensional outlier graph, row {}", a.row);
        fs::write(path, report::render_explain_svg(&title, names, &scores)).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

/// Loads every `.csv` and `.arff` file of `dir`, sorted by file name.
pub fn load_dataset_dir(dir: &Path, label_column: &str) -> Result<Vec<(String, Dataset)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && matches!(
                    p.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
                    Some("csv" | "arff")
                )
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::parse(dir, "no .csv or .arff datasets found"));
    }
    paths
        .iter()
        .map(|p| {
            let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset").to_string();
            let is_arff = p.extension().is_some_and(|e| e.eq_ignore_ascii_case("arff"));
            let data = if is_arff {
                load_arff(p, &ArffOptions::default())?
            } else {
                load_csv(p, Some(label_column))?
            };
            Ok((name, data))
        })
        .collect()
}

fn default_aggregate_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("bench");
    out.with_file_name(format!("{stem}.aggregate.csv"))
}

fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let datasets = load_dataset_dir(&a.data, &a.label_column)?;
    let config = TrialConfig {
        trials: a.trials,
        train_fraction: a.train_fraction,
        base_seed: a.seed,
        variants: a.variants.clone(),
    };
    let rows = pool(a.jobs)?.install(|| bench::run_benchmark(&datasets, &config))?;
    bench::write_trials_csv(&rows, create(&a.out)?, a.record_timing).map_err(|e| Error::io(&a.out, e))?;
    let agg = a.aggregate.clone().unwrap_or_else(|| default_aggregate_path(&a.out));
    bench::write_aggregate_csv(&rows, create(&agg)?, a.record_timing).map_err(|e| Error::io(&agg, e))?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let _ = writeln!(out, "{:<24} {:<15} {:>8} {:>8} {:>7}", "dataset", "variant", "roc_auc", "ap", "trials");
    for row in &rows {
        let _ = writeln!(
            out,
            "{:<24} {:<15} {:>8.4} {:>8.4} {:>3}/{:<3}",
            row.dataset,
            row.variant.name(),
            row.mean_roc_auc,
            row.mean_ap,
            row.valid_trials(),
            row.trials.len()
        );
        if row.invalid_trials > 0 {
            eprintln!(
                "warning: {} / {}: {} trial(s) had a single-class test split and were excluded",
                row.dataset, row.variant, row.invalid_trials
            );
        }
    }
    Ok(())
}

fn cmd_gen(g: GenCommand) -> Result<()> {
    let (data, out) = match g {
        GenCommand::Toy {
            n_inliers,
            n_outliers,
            orientation,
            seed,
            out,
        } => {
            let orientation = match orientation {
                OrientationArg::LowerLeft => Orientation::LowerLeft,
                OrientationArg::UpperRight => Orientation::UpperRight,
            };
            let spec = ToySpec {
                n_inliers,
                n_outliers,
                orientation,
                seed,
            };
            (gen_toy(&spec).map_err(|e| Error::data("gen toy", e))?, out)
        }
        GenCommand::Random { n, d, seed, out } => {
            (gen_random(n, d, seed).map_err(|e| Error::data("gen random", e))?, out)
        }
    };
    save_csv(&data, out)
}

fn cmd_convert(a: &ConvertArgs) -> Result<()> {
    let options = ArffOptions {
        labels: a
            .outlier_value
            .clone()
            .map(LabelMapping::Outlier)
            .unwrap_or_default(),
        drop: a.drop_column.clone(),
    };
    let data = load_arff(&a.arff, &options)?;
    save_csv(&data, &a.out)
}

fn cmd_scaling(a: &ScalingArgs) -> Result<()> {
    let grid: Vec<(usize, usize)> = a.n.iter().flat_map(|&n| a.d.iter().map(move |&d| (n, d))).collect();
    let records = bench::time_scaling(&grid, a.seed, a.repeats)?;
    bench::write_timing_table(&records, create(&a.out)?).map_err(|e| Error::io(&a.out, e))?;
    if let Some(path) = &a.records {
        bench::write_timing_records(&records, create(path)?).map_err(|e| Error::io(path, e))?;
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for r in &records {
        let _ = writeln!(out, "n={:<8} d={:<6} {:>10.4} s  (cv {:.3})", r.n, r.d, r.mean(), r.cv());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_flags_are_rejected() {
        assert!(Cli::try_parse_from(["copod", "fit", "--input", "a", "--output", "b", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["copod", "fit", "--input", "a", "--output", "b"]).is_ok());
    }

    #[test]
    fn variant_lists() {
        let cli = Cli::try_parse_from(["copod", "bench", "--data", "d", "--out", "o", "--variants", "left,right,two,sc,max"]).unwrap();
        match cli.command {
            Command::Bench(b) => assert_eq!(b.variants, Variant::ALL.to_vec()),
            _ => unreachable!(),
        }
        assert!(Cli::try_parse_from(["copod", "score", "--model", "m", "--input", "i", "--output", "o", "--variant", "mean"]).is_err());
    }

    #[test]
    fn aggregate_path() {
        assert_eq!(default_aggregate_path(Path::new("/tmp/run.csv")), PathBuf::from("/tmp/run.aggregate.csv"));
    }
}
