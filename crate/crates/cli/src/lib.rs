//! Command-line front end for `wenkit`.
//!
//! Every subcommand computes all of its outputs in memory first and only
//! then writes them, each through a temporary file renamed into place, so a
//! failing run leaves no partial artifacts behind.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;
use wenkit::datapipe::{load_labels, load_predictions, oversample_plan, stratified_split_by_class, write_labels, write_predictions};
use wenkit::ensemble::{ensemble, WeightScheme};
use wenkit::evalcore::{metric_report, roc_auc, roc_points, ScoredExample};
use wenkit::lrsched::{schedule, write_schedule, DEFAULT_BASE_RATE, DEFAULT_MAX_RATE};
use wenkit::synthlab::{gen_ground_truth, gen_predictor, SyntheticPredictorSpec, POSITIVE};
use wenkit::{ClassIndex, ConfusionMatrix, ErrorKind, LabelTable, LrScheduleConfig, MetricReport, PredictionSet};

#[derive(Debug, Parser)]
#[command(name = "wenkit", version, about = "Metric-weighted soft-voting ensembles and classification metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one model's predictions against labels.
    Evaluate(EvaluateArgs),
    /// Fuse several models' predictions and evaluate the result.
    Ensemble(EnsembleArgs),
    /// ROC curve points and AUC for one model.
    Roc(RocArgs),
    /// Random-oversampling plan balancing every class to the majority size.
    Rebalance(RebalanceArgs),
    /// Seeded stratified train/validation split.
    Split(SplitArgs),
    /// Halving triangular cyclic learning-rate table.
    LrSchedule(LrArgs),
    /// Synthetic labels and scorer outputs.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Labels file (`example_id,class`).
    #[arg(long)]
    pub labels: PathBuf,
    /// Class order, comma separated; inferred from the labels when omitted.
    #[arg(long, value_delimiter = ',')]
    pub classes: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub labels: LabelArgs,
    /// Predictions file (`example_id,p_<class>,...`).
    #[arg(long)]
    pub pred: PathBuf,
    /// Class whose probability is scored for AUC; defaults to the last class.
    #[arg(long)]
    pub positive_class: Option<String>,
    /// Model id recorded in the report; defaults to the predictions file stem.
    #[arg(long)]
    pub model_id: Option<String>,
    /// Output directory for `report.json` and `confusion.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    #[command(flatten)]
    pub labels: LabelArgs,
    /// Candidate predictions; the file stem is the model id.
    #[arg(long = "pred", required = true, num_args = 1..)]
    pub preds: Vec<PathBuf>,
    /// Validation reports written by `evaluate`, one per candidate.
    #[arg(long = "val-report", num_args = 1..)]
    pub val_reports: Vec<PathBuf>,
    /// sap, acc, auc, f1 or kappa.
    #[arg(long, default_value = "kappa")]
    pub scheme: String,
    #[arg(long)]
    pub positive_class: Option<String>,
    /// Output directory for `fused.csv`, `weights.csv`, `report.json` and `confusion.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    #[command(flatten)]
    pub labels: LabelArgs,
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub positive_class: Option<String>,
    /// Output directory for `roc.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RebalanceArgs {
    #[command(flatten)]
    pub labels: LabelArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for `oversample.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[command(flatten)]
    pub labels: LabelArgs,
    /// Validation fraction applied to every class.
    #[arg(long)]
    pub fraction: Option<f64>,
    /// Per-class override, `class=fraction`; repeatable.
    #[arg(long = "class-fraction")]
    pub class_fractions: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for `split.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LrArgs {
    #[arg(long, default_value_t = DEFAULT_BASE_RATE)]
    pub base_rate: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_RATE)]
    pub max_rate: f64,
    /// Iterations per half cycle.
    #[arg(long, conflicts_with = "iters_per_epoch")]
    pub step_size: Option<u64>,
    /// Derive the step size as six epochs of this many iterations.
    #[arg(long)]
    pub iters_per_epoch: Option<u64>,
    /// Number of iterations to tabulate.
    #[arg(long)]
    pub total: u64,
    /// Output directory for `lr_schedule.csv`; the table goes to stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub positives: usize,
    #[arg(long)]
    pub negatives: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Synthetic scorer, `model_id=skill`; repeatable.
    #[arg(long = "model")]
    pub models: Vec<String>,
    /// Output directory for `labels.csv` and `<model_id>.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

/// A library error together with the file it came from, if any.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", fmt_located(.path, .source))]
    Located { path: PathBuf, source: wenkit::Error },
    #[error(transparent)]
    Core(#[from] wenkit::Error),
}

fn fmt_located(path: &Path, err: &wenkit::Error) -> String {
    match err {
        wenkit::Error::Parse { line, msg } => format!("{}:{line}: {msg}", path.display()),
        other => format!("{}: {other}", path.display()),
    }
}

impl CliError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            CliError::Located { source, .. } | CliError::Core(source) => source.kind(),
        }
    }

    /// Process exit status for this error. Status 2 is left to argument parsing.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Io => 1,
            ErrorKind::Parse => 3,
            ErrorKind::Alignment => 4,
            ErrorKind::Arity => 5,
            ErrorKind::Degenerate => 6,
            ErrorKind::Invalid => 7,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn at<T>(path: &Path, r: wenkit::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Located {
        path: path.to_path_buf(),
        source,
    })
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Core(wenkit::Error::Invalid(msg.into()))
}

/// Files produced by a command, written together once everything succeeded.
#[derive(Debug, Default)]
struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    fn commit(self, dir: &Path) -> CliResult<()> {
        fs::create_dir_all(dir).map_err(wenkit::Error::from)?;
        for (name, bytes) in self.files {
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wenkit::Error::from)?;
            tmp.write_all(&bytes).map_err(wenkit::Error::from)?;
            tmp.persist(dir.join(&name))
                .map_err(|e| wenkit::Error::from(e.error))?;
        }
        Ok(())
    }
}

fn read_labels(args: &LabelArgs) -> CliResult<LabelTable> {
    read_labels_with(args, None)
}

/// Class order: `--classes` if given, else the `p_<class>` columns of `pred`, else first appearance.
fn read_labels_with(args: &LabelArgs, pred: Option<&Path>) -> CliResult<LabelTable> {
    let classes = args.classes.clone().or_else(|| pred.and_then(header_classes));
    let file = at(&args.labels, fs::File::open(&args.labels).map_err(Into::into))?;
    at(&args.labels, load_labels(std::io::BufReader::new(file), classes.as_deref()))
}

fn header_classes(path: &Path) -> Option<Vec<String>> {
    let text = fs::read_to_string(path).ok()?;
    let header = text.lines().find(|l| !l.trim().is_empty())?;
    let classes: Option<Vec<String>> = header
        .split(',')
        .skip(1)
        .map(|c| c.trim().strip_prefix("p_").map(str::to_string))
        .collect();
    classes.filter(|c| !c.is_empty())
}

fn read_predictions(path: &Path, model_id: &str, labels: &LabelTable) -> CliResult<PredictionSet> {
    let file = at(path, fs::File::open(path).map_err(Into::into))?;
    at(path, load_predictions(std::io::BufReader::new(file), model_id, labels))
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".to_string())
}

fn positive_index(labels: &LabelTable, name: Option<&str>) -> CliResult<ClassIndex> {
    match name {
        None => Ok(ClassIndex(labels.n_classes() - 1)),
        Some(n) => labels
            .class_index(n)
            .ok_or_else(|| invalid(format!("positive class '{n}' is not one of {:?}", labels.class_names()))),
    }
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> wenkit::Result<()>) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

/// `actual\predicted,<classes...>` header followed by one row per actual class.
pub fn confusion_csv(cm: &ConfusionMatrix) -> Vec<u8> {
    let mut out = String::from("actual\\predicted");
    for c in cm.class_names() {
        let _ = write!(out, ",{c}");
    }
    out.push('\n');
    for (name, row) in cm.class_names().iter().zip(cm.counts()) {
        out.push_str(name);
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out.into_bytes()
}

fn report_json(report: &MetricReport) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(report).map_err(|e| invalid(format!("report serialisation: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn read_report(path: &Path) -> CliResult<MetricReport> {
    let text = at(path, fs::read_to_string(path).map_err(Into::into))?;
    serde_json::from_str(&text).map_err(|e| CliError::Located {
        path: path.to_path_buf(),
        source: wenkit::Error::Parse {
            line: e.line() as u64,
            msg: e.to_string(),
        },
    })
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> CliResult<String> {
    let labels = read_labels_with(&args.labels, Some(&args.pred))?;
    let model_id = args.model_id.clone().unwrap_or_else(|| file_stem(&args.pred));
    let probs = read_predictions(&args.pred, &model_id, &labels)?;
    let positive = positive_index(&labels, args.positive_class.as_deref())?;
    let report = at(&args.pred, metric_report(&labels, &probs, positive))?;

    let mut out = Outputs::default();
    out.add("report.json", report_json(&report)?);
    out.add("confusion.csv", confusion_csv(&report.confusion));
    out.commit(&args.out)?;
    Ok(report.to_table())
}

pub fn cmd_ensemble(args: &EnsembleArgs) -> CliResult<String> {
    let scheme: WeightScheme = args.scheme.parse()?;
    if args.preds.len() < 2 {
        return Err(wenkit::Error::Arity(format!("ensemble needs at least 2 --pred files, got {}", args.preds.len())).into());
    }
    let labels = read_labels_with(&args.labels, args.preds.first().map(PathBuf::as_path))?;
    let positive = positive_index(&labels, args.positive_class.as_deref())?;
    let candidates = args
        .preds
        .iter()
        .map(|p| read_predictions(p, &file_stem(p), &labels))
        .collect::<CliResult<Vec<_>>>()?;

    let mut reports = BTreeMap::new();
    if scheme != WeightScheme::Sap {
        if args.val_reports.is_empty() {
            return Err(invalid(format!("scheme '{scheme}' needs --val-report files")));
        }
        for path in &args.val_reports {
            let r = read_report(path)?;
            if reports.insert(r.model_id.clone(), r).is_some() {
                return Err(invalid(format!("{}: duplicate validation report", path.display())));
            }
        }
    }
    let result = ensemble(&candidates, &reports, scheme)?;
    let model_id = match scheme {
        WeightScheme::Sap => "sap".to_string(),
        s => format!("wen_{s}"),
    };
    let fused = result.to_prediction_set(&model_id);
    let report = metric_report(&labels, &fused, positive)?;

    let mut weights = String::from("model_id,weight\n");
    for (id, w) in result.weights_used.iter() {
        let _ = writeln!(weights, "{id},{w}");
    }
    let mut out = Outputs::default();
    out.add("fused.csv", csv_bytes(|b| write_predictions(&fused, b))?);
    out.add("weights.csv", weights.clone().into_bytes());
    out.add("report.json", report_json(&report)?);
    out.add("confusion.csv", confusion_csv(&report.confusion));
    out.commit(&args.out)?;

    let mut text = format!("scheme: {scheme}\n");
    for (id, w) in result.weights_used.iter() {
        let _ = writeln!(text, "  weight {id:<16}{w:.6}");
    }
    text.push_str(&report.to_table());
    Ok(text)
}

pub fn cmd_roc(args: &RocArgs) -> CliResult<String> {
    let labels = read_labels_with(&args.labels, Some(&args.pred))?;
    let probs = read_predictions(&args.pred, &file_stem(&args.pred), &labels)?;
    let positive = positive_index(&labels, args.positive_class.as_deref())?;
    let scored = labels
        .iter()
        .map(|(id, c)| {
            probs
                .get(id)
                .map(|v| ScoredExample::new(id, v[positive.get()], c == positive))
                .ok_or_else(|| wenkit::Error::Coverage(format!("no prediction for '{id}'")))
        })
        .collect::<wenkit::Result<Vec<_>>>();
    let scored = at(&args.pred, scored)?;
    let points = roc_points(&scored)?;
    let auc = roc_auc(&scored)?;

    let mut table = String::from("fpr,tpr\n");
    for p in &points {
        let _ = writeln!(table, "{},{}", p.fpr, p.tpr);
    }
    let mut out = Outputs::default();
    out.add("roc.csv", table.into_bytes());
    out.commit(&args.out)?;
    Ok(format!("AUC   {auc:.3}\n"))
}

pub fn cmd_rebalance(args: &RebalanceArgs) -> CliResult<String> {
    let labels = read_labels(&args.labels)?;
    let plan = oversample_plan(&labels, args.seed)?;
    let mut out = Outputs::default();
    out.add("oversample.csv", csv_bytes(|b| plan.write(b))?);
    out.commit(&args.out)?;

    let mut text = String::new();
    for (name, total) in labels.class_names().iter().zip(plan.class_totals(&labels)) {
        let _ = writeln!(text, "{name:<12}{total}");
    }
    let _ = writeln!(text, "{:<12}{}", "total", plan.total());
    Ok(text)
}

pub fn cmd_split(args: &SplitArgs) -> CliResult<String> {
    let labels = read_labels(&args.labels)?;
    let mut fractions = vec![args.fraction; labels.n_classes()];
    for spec in &args.class_fractions {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| invalid(format!("--class-fraction '{spec}' is not class=fraction")))?;
        let c = labels
            .class_index(name)
            .ok_or_else(|| invalid(format!("unknown class '{name}' in --class-fraction")))?;
        let f: f64 = value
            .parse()
            .map_err(|_| invalid(format!("'{value}' is not a fraction")))?;
        fractions[c.get()] = Some(f);
    }
    let fractions = fractions
        .into_iter()
        .zip(labels.class_names())
        .map(|(f, name)| f.ok_or_else(|| invalid(format!("no validation fraction for class '{name}'"))))
        .collect::<CliResult<Vec<f64>>>()?;
    let plan = stratified_split_by_class(&labels, &fractions, args.seed)?;
    let mut out = Outputs::default();
    out.add("split.csv", csv_bytes(|b| plan.write(b))?);
    out.commit(&args.out)?;

    let mut text = String::new();
    let counts = labels.class_counts();
    for ((name, v), n) in labels.class_names().iter().zip(plan.validation_counts(&labels)).zip(counts) {
        let _ = writeln!(text, "{name:<12}train {:<8}validation {v}", n - v);
    }
    Ok(text)
}

pub fn cmd_lr_schedule(args: &LrArgs) -> CliResult<String> {
    let cfg = match (args.step_size, args.iters_per_epoch) {
        (Some(s), None) => LrScheduleConfig::new(args.base_rate, args.max_rate, s)?,
        (None, Some(i)) => LrScheduleConfig::from_epochs(args.base_rate, args.max_rate, i)?,
        _ => return Err(invalid("give exactly one of --step-size or --iters-per-epoch")),
    };
    let series = schedule(&cfg, args.total)?;
    let table = csv_bytes(|b| write_schedule(&series, b))?;
    match &args.out {
        Some(dir) => {
            let mut out = Outputs::default();
            out.add("lr_schedule.csv", table);
            out.commit(dir)?;
            Ok(format!("{} rows, step size {}\n", series.len(), cfg.step_size))
        }
        None => Ok(String::from_utf8(table).expect("ASCII table")),
    }
}

pub fn cmd_synth(args: &SynthArgs) -> CliResult<String> {
    let labels = gen_ground_truth(args.positives, args.negatives, args.seed)?;
    let mut out = Outputs::default();
    out.add("labels.csv", csv_bytes(|b| write_labels(&labels, b))?);
    let mut seen = std::collections::HashSet::new();
    for spec in &args.models {
        let (id, skill) = spec
            .split_once('=')
            .ok_or_else(|| invalid(format!("--model '{spec}' is not model_id=skill")))?;
        let skill: f64 = skill
            .parse()
            .map_err(|_| invalid(format!("'{skill}' is not a skill value")))?;
        if id.is_empty() || id == "labels" || !seen.insert(id.to_string()) {
            return Err(invalid(format!("model id '{id}' is empty, reserved or repeated")));
        }
        let set: PredictionSet = gen_predictor(&labels, POSITIVE, &SyntheticPredictorSpec::new(id, skill, args.seed))?;
        out.add(format!("{id}.csv"), csv_bytes(|b| write_predictions(&set, b))?);
    }
    let n = out.files.len();
    out.commit(&args.out)?;
    Ok(format!("wrote {n} file(s) to {}\n", args.out.display()))
}

pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Ensemble(a) => cmd_ensemble(a),
        Command::Roc(a) => cmd_roc(a),
        Command::Rebalance(a) => cmd_rebalance(a),
        Command::Split(a) => cmd_split(a),
        Command::LrSchedule(a) => cmd_lr_schedule(a),
        Command::Synth(a) => cmd_synth(a),
    }
}
