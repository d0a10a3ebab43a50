//! Command-line surface: `privatize`, `evaluate`, `tune`, `sweep`, `plot`.
//!
//! Exit codes: 0 success (tune: threshold met), 1 usage or configuration
//! error, 2 i/o failure or unreadable input data, 3 tune budget exhausted.
//! Every report embeds the full effective configuration and carries no
//! timestamps, so identical invocations produce byte-identical files.

use std::ffi::OsString;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dataset::{CsvSchema, Dataset, LabelColumn};
use crate::error::{Error, Result};
use crate::evaluate::{cross_validate, pipeline_evaluate_with, CvConfig, CvResult, EvalTarget};
use crate::knn::{Distance, KnnConfig, TieRule};
use crate::noise::{privatize, NoiseMode, NoiseParams};
use crate::plot::PlotData;
use crate::report::{render_confusion, Report};
use crate::tuner::{tune, SeedPolicy, TuneConfig, TuneOutcome, TuneSchedule, TuneTrace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_BUDGET_EXHAUSTED: i32 = 3;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "PRIVGAUGE_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "privgauge",
    version,
    about = "Privatize numeric labeled datasets with additive Gaussian noise and gauge the remaining utility with a KNN classifier under k-fold cross-validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Add seeded Gaussian noise to a dataset and write the privatized copy
    Privatize(PrivatizeCmd),
    /// Cross-validate the KNN classifier, optionally on privatized data
    Evaluate(EvaluateCmd),
    /// Run the threshold-retry noise tuning loop
    Tune(TuneCmd),
    /// Evaluate a grid of noise levels x seeds and tabulate the errors
    Sweep(SweepCmd),
    /// Render a classification scatter plot from a report or plot-data file
    Plot(PlotCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NoiseModeArg {
    Fixed,
    AttributeScaled,
}

impl From<NoiseModeArg> for NoiseMode {
    fn from(arg: NoiseModeArg) -> NoiseMode {
        match arg {
            NoiseModeArg::Fixed => NoiseMode::Fixed,
            NoiseModeArg::AttributeScaled => NoiseMode::AttributeScaled,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieRuleArg {
    NearestTiedClass,
    LowestClassIndex,
}

impl From<TieRuleArg> for TieRule {
    fn from(arg: TieRuleArg) -> TieRule {
        match arg {
            TieRuleArg::NearestTiedClass => TieRule::NearestTiedClass,
            TieRuleArg::LowestClassIndex => TieRule::LowestClassIndex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeedPolicyArg {
    Fixed,
    FreshPerStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Aligned tables for people
    Human,
    /// The machine report itself (key=value lines)
    Machine,
}

#[derive(Args)]
struct InputArgs {
    /// Input dataset (delimiter-separated text)
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Field delimiter
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Treat the first row as a header
    #[arg(long)]
    has_header: bool,
    /// Label column: "last" or a zero-based index
    #[arg(long, default_value = "last", value_name = "COL")]
    label_column: String,
}

impl InputArgs {
    fn schema(&self) -> Result<CsvSchema> {
        let delimiter = u8::try_from(u32::from(self.delimiter))
            .map_err(|_| Error::Config(format!("delimiter {:?} is not a single byte", self.delimiter)))?;
        let label_column = if self.label_column == "last" {
            LabelColumn::Last
        } else {
            let idx = self.label_column.parse().map_err(|_| {
                Error::Config(format!(
                    "label column must be \"last\" or an index, got {:?}",
                    self.label_column
                ))
            })?;
            LabelColumn::Index(idx)
        };
        Ok(CsvSchema {
            delimiter,
            has_header: self.has_header,
            label_column,
        })
    }

    fn load(&self) -> Result<Dataset> {
        let file = fs::File::open(&self.input).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", self.input.display()),
            ))
        })?;
        Dataset::from_csv(BufReader::new(file), &self.schema()?)
    }

    fn describe(&self, report: &mut Report, data: &Dataset) {
        report.push("dataset.path", self.input.display());
        report.push("dataset.delimiter", self.delimiter);
        report.push("dataset.has_header", self.has_header);
        report.push("dataset.label_column", &self.label_column);
        report.push("dataset.n", data.n_records());
        report.push("dataset.attributes", data.n_attributes());
        report.push("dataset.classes", data.class_names().join(","));
        let stats = data.attribute_stats();
        for (j, name) in data.attribute_names().iter().enumerate() {
            report.push(format!("dataset.attr.{name}.mean"), stats.means[j]);
            report.push(format!("dataset.attr.{name}.std"), stats.stds[j]);
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Neighbor count
    #[arg(short, long, default_value_t = 1)]
    k: usize,
    /// Class-vote tie rule
    #[arg(long, value_enum, default_value_t = TieRuleArg::NearestTiedClass)]
    tie_rule: TieRuleArg,
    /// Cross-validation fold count
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Deal folds without per-class stratification
    #[arg(long)]
    no_stratify: bool,
}

impl EvalArgs {
    fn knn(&self) -> KnnConfig {
        KnnConfig {
            k: self.k,
            tie_rule: self.tie_rule.into(),
            distance: Distance::Euclidean,
        }
    }

    fn cv(&self, seed: u64) -> CvConfig {
        CvConfig {
            fold_count: self.folds,
            seed,
            stratified: !self.no_stratify,
        }
    }

    fn describe(&self, report: &mut Report) {
        report.push("knn.k", self.k);
        report.push("knn.tie_rule", TieRule::from(self.tie_rule));
        report.push("knn.distance", Distance::Euclidean);
        report.push("cv.folds", self.folds);
        report.push("cv.stratified", !self.no_stratify);
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output directory (default: $PRIVGAUGE_OUT_DIR, else ".")
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// What to print on stdout
    #[arg(long, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
}

impl OutputArgs {
    fn dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }
}

#[derive(Args)]
struct PrivatizeCmd {
    #[command(flatten)]
    input: InputArgs,
    /// Noise parameterization
    #[arg(long, value_enum, default_value_t = NoiseModeArg::Fixed)]
    mode: NoiseModeArg,
    /// Noise mean (fixed) or mean multiplier (attribute-scaled)
    #[arg(long)]
    mean: Option<f64>,
    /// Noise std (fixed) or std multiplier (attribute-scaled)
    #[arg(long)]
    std: Option<f64>,
    /// Noise stream seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (default: <out-dir>/privatized.csv)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EvaluateCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    eval: EvalArgs,
    /// Evaluation seeds: "42", "1,2,3", or a range "0..20"
    #[arg(long, default_value = "0")]
    seeds: String,
    /// Privatize before evaluating, with this noise parameterization
    #[arg(long, value_enum)]
    mode: Option<NoiseModeArg>,
    /// Noise mean (fixed) or mean multiplier (attribute-scaled)
    #[arg(long)]
    mean: Option<f64>,
    /// Noise std (fixed) or std multiplier (attribute-scaled)
    #[arg(long)]
    std: Option<f64>,
    /// Pin the noise stream seed instead of reusing each run seed
    #[arg(long)]
    noise_seed: Option<u64>,
    /// Classify original-feature queries against privatized training folds
    #[arg(long)]
    test_on_original: bool,
    /// Also write per-record plot data
    #[arg(long)]
    plot_data: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TuneCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    eval: EvalArgs,
    /// Fold seed for every evaluation
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Accept once the error is at or below this value (in [0,1])
    #[arg(long)]
    threshold: Option<f64>,
    /// Multiplicative std decay factor in (0,1)
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Step budget
    #[arg(long, default_value_t = 10)]
    max_iterations: usize,
    /// Per-step seed handling
    #[arg(long, value_enum, default_value_t = SeedPolicyArg::Fixed)]
    seed_policy: SeedPolicyArg,
    /// Initial noise mode
    #[arg(long, value_enum, default_value_t = NoiseModeArg::Fixed)]
    init_mode: NoiseModeArg,
    /// Initial noise mean (default 0 fixed, 1 attribute-scaled)
    #[arg(long)]
    init_mean: Option<f64>,
    /// Initial noise std
    #[arg(long, default_value_t = 1.0)]
    init_std: f64,
    /// Initial noise seed
    #[arg(long, default_value_t = 0)]
    init_seed: u64,
    /// Tune config file (key=value; overrides the inline flags)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    eval: EvalArgs,
    /// Comma-separated noise std values, e.g. "0,0.05,0.1,0.5"
    #[arg(long, value_name = "LIST")]
    sigmas: String,
    /// Evaluation seeds: "42", "1,2,3", or a range "0..20"
    #[arg(long, default_value = "0")]
    seeds: String,
    /// Noise parameterization for every grid cell
    #[arg(long, value_enum, default_value_t = NoiseModeArg::Fixed)]
    mode: NoiseModeArg,
    /// Noise mean (default 0 fixed, 1 attribute-scaled)
    #[arg(long)]
    mean: Option<f64>,
    /// Pin the noise stream seed instead of reusing each run seed
    #[arg(long)]
    noise_seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PlotCmd {
    /// An evaluate report (single seed) or a plot-data file
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Output SVG path (default: <out-dir>/plot.svg)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Plot title
    #[arg(long)]
    title: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Parses args and runs the selected command, returning the process exit
/// code. All diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Privatize(cmd) => run_privatize(cmd),
        Command::Evaluate(cmd) => run_evaluate(cmd),
        Command::Tune(cmd) => run_tune(cmd),
        Command::Sweep(cmd) => run_sweep(cmd),
        Command::Plot(cmd) => run_plot(cmd),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn resolve_noise(mode: NoiseMode, mean: Option<f64>, std: Option<f64>, seed: u64) -> NoiseParams {
    let (default_mean, default_std) = match mode {
        NoiseMode::Fixed => (0.0, 0.0),
        NoiseMode::AttributeScaled => (1.0, 1.0),
    };
    NoiseParams {
        mode,
        mean: mean.unwrap_or(default_mean),
        std: std.unwrap_or(default_std),
        seed,
    }
}

/// "42", "1,2,3", or "0..20" (half-open range).
fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = |t: &str| Error::Config(format!("bad seed list {t:?}"));
    let seeds: Vec<u64> = if let Some((start, end)) = text.split_once("..") {
        let start: u64 = start.trim().parse().map_err(|_| bad(text))?;
        let end: u64 = end.trim().parse().map_err(|_| bad(text))?;
        if end <= start {
            return Err(bad(text));
        }
        (start..end).collect()
    } else {
        text.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad(text)))
            .collect::<Result<_>>()?
    };
    if seeds.is_empty() {
        return Err(Error::Config("seed list is empty".into()));
    }
    Ok(seeds)
}

fn parse_sigmas(text: &str) -> Result<Vec<f64>> {
    let sigmas: Vec<f64> = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad sigma list {text:?}")))
        })
        .collect::<Result<_>>()?;
    if sigmas.is_empty() {
        return Err(Error::Config("sigma list is empty".into()));
    }
    for &s in &sigmas {
        if s < 0.0 || !s.is_finite() {
            return Err(Error::Config(format!("sigma {s} must be nonnegative")));
        }
    }
    Ok(sigmas)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn run_privatize(cmd: PrivatizeCmd) -> Result<i32> {
    let data = cmd.input.load()?;
    let params = resolve_noise(cmd.mode.into(), cmd.mean, cmd.std, cmd.seed);
    let out_path = cmd
        .out
        .clone()
        .unwrap_or_else(|| cmd.output.dir().join("privatized.csv"));
    let privatized = privatize(&data, &params)?;

    let mut buf = Vec::new();
    privatized.to_csv(&mut buf, &cmd.input.schema()?)?;
    write_file(&out_path, std::str::from_utf8(&buf).expect("csv output is utf-8"))?;

    println!(
        "privatized {} records x {} attributes (mode={}, mean={}, std={}, seed={})",
        privatized.n_records(),
        privatized.n_attributes(),
        params.mode,
        params.mean,
        params.std,
        params.seed
    );
    println!("wrote {}", out_path.display());
    Ok(EXIT_OK)
}

struct SeedRun {
    seed: u64,
    result: CvResult,
}

fn run_evaluate(cmd: EvaluateCmd) -> Result<i32> {
    let data = cmd.input.load()?;
    let seeds = parse_seeds(&cmd.seeds)?;
    let knn = cmd.eval.knn();

    let noise_enabled = cmd.mode.is_some();
    if !noise_enabled && (cmd.mean.is_some() || cmd.std.is_some() || cmd.noise_seed.is_some()) {
        return Err(Error::Config(
            "noise flags need --mode (fixed or attribute-scaled)".into(),
        ));
    }
    if cmd.test_on_original && !noise_enabled {
        return Err(Error::Config("--test-on-original needs --mode".into()));
    }
    let target = if cmd.test_on_original {
        EvalTarget::Original
    } else {
        EvalTarget::Privatized
    };

    let mut runs = Vec::with_capacity(seeds.len());
    for &seed in &seeds {
        let cv = cmd.eval.cv(seed);
        let result = match cmd.mode {
            Some(mode) => {
                let params = resolve_noise(
                    mode.into(),
                    cmd.mean,
                    cmd.std,
                    cmd.noise_seed.unwrap_or(seed),
                );
                pipeline_evaluate_with(&data, &params, &knn, &cv, target)?
            }
            None => cross_validate(&data, &knn, &cv)?,
        };
        runs.push(SeedRun { seed, result });
    }

    // machine report
    let mut report = Report::new("evaluate");
    cmd.input.describe(&mut report, &data);
    cmd.eval.describe(&mut report);
    report.push("noise.enabled", noise_enabled);
    if let Some(mode) = cmd.mode {
        let params = resolve_noise(mode.into(), cmd.mean, cmd.std, 0);
        report.push("noise.mode", params.mode);
        report.push("noise.mean", params.mean);
        report.push("noise.std", params.std);
        match cmd.noise_seed {
            Some(seed) => report.push("noise.seed", seed),
            None => report.push("noise.seed", "run-seed"),
        }
        report.push(
            "eval.target",
            match target {
                EvalTarget::Privatized => "privatized",
                EvalTarget::Original => "original",
            },
        );
    }
    report.push(
        "seeds",
        seeds
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    for run in &runs {
        report.push(
            format!("seed.{}.overall_error", run.seed),
            run.result.overall_error,
        );
        for (f, e) in run.result.per_fold_error.iter().enumerate() {
            report.push(format!("seed.{}.fold_error.{f}", run.seed), e);
        }
    }
    if let [run] = runs.as_slice() {
        for t in 0..data.n_classes() {
            for p in 0..data.n_classes() {
                report.push(
                    format!("confusion.{t}.{p}"),
                    run.result.confusion.count(t, p),
                );
            }
        }
        if data.n_attributes() >= 2 {
            let plot = PlotData::from_result(&data, &run.result)?;
            report.push("plot.axis_x", &plot.axis_x);
            report.push("plot.axis_y", &plot.axis_y);
            for p in &plot.points {
                report.push(
                    format!("record.{}", p.index),
                    format!("{},{},{},{}", p.x, p.y, p.true_class, p.predicted_class),
                );
            }
        }
    }
    let errors: Vec<f64> = runs.iter().map(|r| r.result.overall_error).collect();
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    let min = errors.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = errors.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    report.push("error.mean", mean);
    report.push("error.min", min);
    report.push("error.max", max);

    let report_path = cmd.output.dir().join("evaluate_report.txt");
    write_file(&report_path, &report.to_machine_string())?;

    if cmd.plot_data {
        for run in &runs {
            let plot = PlotData::from_result(&data, &run.result)?;
            let mut buf = Vec::new();
            plot.write_text(&mut buf)?;
            let name = if runs.len() == 1 {
                "plot_data.csv".to_string()
            } else {
                format!("plot_data_{}.csv", run.seed)
            };
            write_file(&cmd.output.dir().join(name), std::str::from_utf8(&buf).unwrap())?;
        }
    }

    // stdout
    match cmd.output.format {
        FormatArg::Machine => print!("{}", report.to_machine_string()),
        FormatArg::Human => {
            for run in &runs {
                println!(
                    "seed {:>4}  overall error {:.4}  ({} of {} misclassified)",
                    run.seed,
                    run.result.overall_error,
                    run.result.confusion.misclassified(),
                    data.n_records()
                );
                let folds: Vec<String> = run
                    .result
                    .per_fold_error
                    .iter()
                    .map(|e| format!("{e:.4}"))
                    .collect();
                println!("           fold errors: {}", folds.join(" "));
            }
            if let [run] = runs.as_slice() {
                print!(
                    "{}",
                    render_confusion(&run.result.confusion, data.class_names())
                );
            }
            if runs.len() > 1 {
                println!(
                    "mean error {mean:.4}  min {min:.4}  max {max:.4}  over {} seeds",
                    runs.len()
                );
            }
        }
    }
    eprintln!("report: {}", report_path.display());
    Ok(EXIT_OK)
}

fn tune_config_from_file(path: &Path, fallback: &TuneConfig) -> Result<TuneConfig> {
    let text = fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    TuneConfig::from_config_str(&text, fallback)
}

fn describe_tune(report: &mut Report, config: &TuneConfig, trace: &TuneTrace) {
    report.push("threshold", config.threshold);
    report.push(
        "schedule",
        match config.schedule {
            TuneSchedule::MultiplicativeDecay { .. } => "multiplicative",
            TuneSchedule::Explicit(_) => "explicit",
        },
    );
    if let TuneSchedule::MultiplicativeDecay { gamma } = config.schedule {
        report.push("gamma", gamma);
    }
    report.push("max_iterations", config.max_iterations);
    report.push("seed_policy", config.seed_policy);
    report.push("knn.k", config.knn.k);
    report.push("cv.folds", config.cv.fold_count);
    report.push("cv.seed", config.cv.seed);
    report.push("cv.stratified", config.cv.stratified);

    for (i, step) in trace.steps.iter().enumerate() {
        report.push(format!("step.{i}.mode"), step.params.mode);
        report.push(format!("step.{i}.mean"), step.params.mean);
        report.push(format!("step.{i}.std"), step.params.std);
        report.push(format!("step.{i}.seed"), step.params.seed);
        report.push(format!("step.{i}.cv_seed"), step.cv_seed);
        report.push(format!("step.{i}.error"), step.error);
        let decision = if step.error <= config.threshold {
            "accept"
        } else if i + 1 == trace.steps.len() {
            "stop"
        } else {
            "continue"
        };
        report.push(format!("step.{i}.decision"), decision);
    }
    report.push("outcome", trace.outcome);
    if let Some(accepted) = &trace.accepted {
        report.push("accepted.mode", accepted.mode);
        report.push("accepted.mean", accepted.mean);
        report.push("accepted.std", accepted.std);
        report.push("accepted.seed", accepted.seed);
    }
}

fn run_tune(cmd: TuneCmd) -> Result<i32> {
    let data = cmd.input.load()?;

    let inline_initial = resolve_noise(
        cmd.init_mode.into(),
        cmd.init_mean,
        Some(cmd.init_std),
        cmd.init_seed,
    );
    let inline = TuneConfig {
        threshold: cmd.threshold.unwrap_or(f64::NAN),
        initial: inline_initial,
        schedule: TuneSchedule::MultiplicativeDecay { gamma: cmd.gamma },
        max_iterations: cmd.max_iterations,
        knn: cmd.eval.knn(),
        cv: cmd.eval.cv(cmd.seed),
        seed_policy: match cmd.seed_policy {
            SeedPolicyArg::Fixed => SeedPolicy::Fixed,
            SeedPolicyArg::FreshPerStep => SeedPolicy::FreshPerStep,
        },
    };
    let config = match &cmd.config {
        Some(path) => tune_config_from_file(path, &inline)?,
        None => {
            if cmd.threshold.is_none() {
                return Err(Error::Config(
                    "--threshold is required (or pass --config)".into(),
                ));
            }
            inline
        }
    };

    let trace = tune(&data, &config)?;

    let mut report = Report::new("tune");
    cmd.input.describe(&mut report, &data);
    describe_tune(&mut report, &config, &trace);
    let report_path = cmd.output.dir().join("tune_report.txt");
    write_file(&report_path, &report.to_machine_string())?;

    match cmd.output.format {
        FormatArg::Machine => print!("{}", report.to_machine_string()),
        FormatArg::Human => {
            println!(
                "{:>4}  {:<16} {:>10} {:>10} {:>6} {:>8} {:>8}  decision",
                "step", "mode", "mean", "std", "seed", "cv_seed", "error"
            );
            for (i, step) in trace.steps.iter().enumerate() {
                let decision = if step.error <= config.threshold {
                    "accept"
                } else if i + 1 == trace.steps.len() {
                    "stop"
                } else {
                    "continue"
                };
                println!(
                    "{i:>4}  {:<16} {:>10} {:>10} {:>6} {:>8} {:>8.4}  {decision}",
                    step.params.mode.to_string(),
                    step.params.mean,
                    step.params.std,
                    step.params.seed,
                    step.cv_seed,
                    step.error
                );
            }
            println!("outcome: {}", trace.outcome);
            if let Some(accepted) = &trace.accepted {
                println!(
                    "accepted: mode={} mean={} std={} seed={}",
                    accepted.mode, accepted.mean, accepted.std, accepted.seed
                );
            }
        }
    }
    eprintln!("report: {}", report_path.display());

    Ok(match trace.outcome {
        TuneOutcome::MetThreshold => EXIT_OK,
        TuneOutcome::BudgetExhausted => EXIT_BUDGET_EXHAUSTED,
    })
}

fn run_sweep(cmd: SweepCmd) -> Result<i32> {
    let data = cmd.input.load()?;
    let sigmas = parse_sigmas(&cmd.sigmas)?;
    let seeds = parse_seeds(&cmd.seeds)?;
    let knn = cmd.eval.knn();
    let mode: NoiseMode = cmd.mode.into();

    let mut report = Report::new("sweep");
    cmd.input.describe(&mut report, &data);
    cmd.eval.describe(&mut report);
    report.push("noise.mode", mode);
    let mean = cmd.mean.unwrap_or(match mode {
        NoiseMode::Fixed => 0.0,
        NoiseMode::AttributeScaled => 1.0,
    });
    report.push("noise.mean", mean);
    match cmd.noise_seed {
        Some(seed) => report.push("noise.seed", seed),
        None => report.push("noise.seed", "run-seed"),
    }
    report.push(
        "sigmas",
        sigmas
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    report.push(
        "seeds",
        seeds
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );

    let mut table = Vec::new();
    for (i, &sigma) in sigmas.iter().enumerate() {
        let mut errors = Vec::with_capacity(seeds.len());
        for &seed in &seeds {
            let params = NoiseParams {
                mode,
                mean,
                std: sigma,
                seed: cmd.noise_seed.unwrap_or(seed),
            };
            let cv = cmd.eval.cv(seed);
            let result = pipeline_evaluate_with(&data, &params, &knn, &cv, EvalTarget::Privatized)?;
            report.push(format!("cell.{i}.{seed}.error"), result.overall_error);
            errors.push(result.overall_error);
        }
        let mean_error = errors.iter().sum::<f64>() / errors.len() as f64;
        let min = errors.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = errors.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        report.push(format!("sigma.{i}.value"), sigma);
        report.push(format!("sigma.{i}.mean_error"), mean_error);
        report.push(format!("sigma.{i}.min_error"), min);
        report.push(format!("sigma.{i}.max_error"), max);
        table.push((sigma, mean_error, min, max));
    }

    let report_path = cmd.output.dir().join("sweep_report.txt");
    write_file(&report_path, &report.to_machine_string())?;

    match cmd.output.format {
        FormatArg::Machine => print!("{}", report.to_machine_string()),
        FormatArg::Human => {
            println!(
                "{:>10} {:>12} {:>10} {:>10}   ({} seeds)",
                "sigma",
                "mean_error",
                "min",
                "max",
                seeds.len()
            );
            for (sigma, mean_error, min, max) in &table {
                println!("{sigma:>10} {mean_error:>12.4} {min:>10.4} {max:>10.4}");
            }
        }
    }
    eprintln!("report: {}", report_path.display());
    Ok(EXIT_OK)
}

fn plot_data_from_report(report: &Report) -> Result<PlotData> {
    let axis_x = report.get("plot.axis_x").unwrap_or("x").to_string();
    let axis_y = report.get("plot.axis_y").unwrap_or("y").to_string();
    let mut points = Vec::new();
    for (key, value) in report.values_with_prefix("record.") {
        let index: usize = key["record.".len()..]
            .parse()
            .map_err(|_| Error::Config(format!("malformed report key {key:?}")))?;
        let cells: Vec<&str> = value.split(',').collect();
        if cells.len() != 4 {
            return Err(Error::Config(format!(
                "malformed record entry {key}={value}"
            )));
        }
        let x: f64 = cells[0]
            .parse()
            .map_err(|_| Error::Config(format!("bad x in {key}={value}")))?;
        let y: f64 = cells[1]
            .parse()
            .map_err(|_| Error::Config(format!("bad y in {key}={value}")))?;
        points.push(crate::plot::PlotPoint {
            index,
            x,
            y,
            true_class: cells[2].to_string(),
            predicted_class: cells[3].to_string(),
        });
    }
    if points.is_empty() {
        return Err(Error::EmptyInput(
            "report carries no per-record plot data (multi-seed run?)".into(),
        ));
    }
    Ok(PlotData {
        axis_x,
        axis_y,
        points,
    })
}

fn run_plot(cmd: PlotCmd) -> Result<i32> {
    let text = fs::read_to_string(&cmd.input).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", cmd.input.display()),
        ))
    })?;

    let first_data_line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .unwrap_or("");
    let from_report = first_data_line.starts_with("format_version=");
    let plot = if from_report {
        plot_data_from_report(&Report::parse_machine(&text)?)?
    } else {
        PlotData::parse_text(&text)?
    };

    let svg_path = cmd
        .out
        .clone()
        .unwrap_or_else(|| cmd.output.dir().join("plot.svg"));
    let title = cmd.title.clone().unwrap_or_else(|| {
        format!(
            "knn classification: {} of {} misclassified",
            plot.misclassified(),
            plot.points.len()
        )
    });
    let mut svg = Vec::new();
    plot.render_svg(&mut svg, &title)?;
    write_file(&svg_path, std::str::from_utf8(&svg).expect("svg is utf-8"))?;

    if from_report {
        let mut buf = Vec::new();
        plot.write_text(&mut buf)?;
        let data_path = cmd.output.dir().join("plot_data.csv");
        write_file(&data_path, std::str::from_utf8(&buf).unwrap())?;
        eprintln!("plot data: {}", data_path.display());
    }

    println!(
        "wrote {} ({} records, {} misclassified)",
        svg_path.display(),
        plot.points.len(),
        plot.misclassified()
    );
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists_parse() {
        assert_eq!(parse_seeds("42").unwrap(), [42]);
        assert_eq!(parse_seeds("1,2,3").unwrap(), [1, 2, 3]);
        assert_eq!(parse_seeds("0..4").unwrap(), [0, 1, 2, 3]);
        assert!(parse_seeds("").is_err());
        assert!(parse_seeds("5..5").is_err());
        assert!(parse_seeds("a,b").is_err());
    }

    #[test]
    fn sigma_lists_parse() {
        assert_eq!(parse_sigmas("0,0.05,0.1").unwrap(), [0.0, 0.05, 0.1]);
        assert!(parse_sigmas("-1").is_err());
        assert!(parse_sigmas("x").is_err());
    }

    #[test]
    fn missing_tune_config_file_is_an_io_error() {
        let fallback = TuneConfig {
            threshold: 1.0,
            initial: NoiseParams::fixed(0.0, 1.0, 0),
            schedule: TuneSchedule::MultiplicativeDecay { gamma: 0.5 },
            max_iterations: 10,
            knn: KnnConfig::default(),
            cv: CvConfig::default(),
            seed_policy: SeedPolicy::Fixed,
        };
        let err = tune_config_from_file(Path::new("/nonexistent/tune.conf"), &fallback)
            .unwrap_err();
        assert_eq!(err.exit_code(), EXIT_IO);
        assert!(err.to_string().contains("/nonexistent/tune.conf"));
    }
}
