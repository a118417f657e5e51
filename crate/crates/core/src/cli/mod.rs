//! The `hol` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 the solver stopped
//! before reaching its tolerance (outputs are still written), 4 some
//! benchmark runs failed (the partial report is still written).

mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::data::{
    load_csv, simulate_intervals, write_dataset_csv, BinAlignment, CsvSchema, Manifest, ScreeningParams,
    SimulationParams, Table,
};
use crate::error::{HolError, Result};
use crate::eval::{run_benchmark, write_report, BenchmarkOptions, BenchmarkReport, ManifestTask, Method, ReportFormat};
use crate::kernel::KernelSpec;
use crate::loss::LossKind;
use crate::model::{default_grid, grid_search_cv, HolConfig, HolModel, Preprocessing};

pub use config::RunConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_PARTIAL: i32 = 4;

/// Kernel ordinal classification from precise and interval labels.
#[derive(Debug, Parser)]
#[command(name = "hol", version, about, long_about = None, max_term_width = 100)]
pub struct Cli {
    /// Seed for every random choice (splits, simulation, folds, tie-breaks)
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for fitting [default: number of logical cores]
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// TOML file with default values; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// More log output (repeat for more)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bin and encode a public dataset per its manifest and write CSV files
    Prepare(PrepareArgs),
    /// Replace precise training labels with simulated class intervals
    Simulate(SimulateArgs),
    /// Fit a model (optionally choosing hyperparameters by grid search)
    Train(TrainArgs),
    /// Predict classes for a feature CSV with a saved model
    Predict(PredictArgs),
    /// Score a hyperparameter grid by k-fold cross-validation
    Cv(CvArgs),
    /// Repeated-run comparison of HOL and its label baselines on public datasets
    Benchmark(BenchmarkArgs),
}

/// Which CSV columns carry labels and groups.
#[derive(Debug, Clone, Args)]
pub struct SchemaArgs {
    /// Single precise-label column (otherwise --label-lo/--label-hi are used)
    #[arg(long, value_name = "COL")]
    pub label: Option<String>,

    /// Lower class-bound column
    #[arg(long, value_name = "COL", default_value = "label_lo")]
    pub label_lo: String,

    /// Upper class-bound column
    #[arg(long, value_name = "COL", default_value = "label_hi")]
    pub label_hi: String,

    /// Group-id column; samples sharing an id stay in one fold
    #[arg(long, value_name = "COL")]
    pub group: Option<String>,

    /// Number of classes [default: largest label in the file]
    #[arg(long, value_name = "K")]
    pub classes: Option<u32>,

    /// Comma-separated feature columns [default: every other column]
    #[arg(long, value_name = "COLS", value_delimiter = ',')]
    pub features: Option<Vec<String>>,
}

impl SchemaArgs {
    fn schema(&self) -> CsvSchema {
        let mut schema = match &self.label {
            Some(c) => CsvSchema::single(c),
            None => CsvSchema::interval(&self.label_lo, &self.label_hi),
        };
        if let Some(k) = self.classes {
            schema = schema.with_classes(k);
        }
        if let Some(g) = &self.group {
            schema = schema.with_group(g);
        }
        if let Some(f) = &self.features {
            schema = schema.with_features(f.clone());
        }
        schema
    }

    fn reserved(&self) -> Vec<String> {
        let mut out = match &self.label {
            Some(c) => vec![c.clone()],
            None => vec![self.label_lo.clone(), self.label_hi.clone()],
        };
        out.extend(self.group.clone());
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Linear,
    Rbf,
    Polynomial,
}

/// Model hyperparameters.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Interval loss [default: mae]
    #[arg(long, value_name = "mae|zero_one")]
    pub loss: Option<String>,

    /// Box bound of the dual variables; larger fits the data harder [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,

    /// Kernel family [default: rbf]
    #[arg(long, value_enum)]
    pub kernel: Option<KernelKind>,

    /// RBF width [default: 1 / number of features]
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,

    /// Polynomial degree [default: 3]
    #[arg(long)]
    pub degree: Option<u32>,

    /// Polynomial offset [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub coef0: Option<f64>,

    /// Solver stopping tolerance on the optimality gap [default: 0.001]
    #[arg(long)]
    pub tol: Option<f64>,

    /// Cap on solver pair updates [default: 10 per dual variable]
    #[arg(long)]
    pub max_passes: Option<usize>,

    /// Drop redundant features before fitting
    #[arg(long)]
    pub screen: bool,

    /// Keep raw feature scales
    #[arg(long)]
    pub no_standardize: bool,
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    /// Built-in manifest name or path to a manifest TOML
    #[arg(long)]
    pub manifest: String,

    /// Directory holding the raw dataset files [default: data]
    #[arg(long, value_name = "DIR")]
    pub data_dir: Option<PathBuf>,

    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,

    /// Also write the seeded train/test split
    #[arg(long)]
    pub split: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Precisely labeled input CSV
    #[arg(long, value_name = "CSV")]
    pub input: PathBuf,

    /// Output CSV with label_lo/label_hi columns
    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,

    #[command(flatten)]
    pub schema: SchemaArgs,

    /// Standard deviation of the bound-drawing normal, in class units [default: 1]
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Placement of the bound distribution relative to the true class
    #[arg(long, value_enum, default_value = "centered")]
    pub alignment: AlignmentArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlignmentArg {
    Centered,
    Outward,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training CSV
    #[arg(long, value_name = "CSV")]
    pub data: PathBuf,

    /// Where to write the model file (JSON)
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,

    #[command(flatten)]
    pub schema: SchemaArgs,

    #[command(flatten)]
    pub params: ModelArgs,

    /// Choose loss, kernel and lambda by cross-validated grid search first
    #[arg(long)]
    pub grid: bool,

    /// Cross-validation folds for --grid [default: 10]
    #[arg(long)]
    pub folds: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Model file written by `train`
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,

    /// Feature CSV (label and group columns, if present, are ignored)
    #[arg(long, value_name = "CSV")]
    pub input: PathBuf,

    /// Output CSV of predicted classes
    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,

    /// Append the K-1 ranking-function values
    #[arg(long)]
    pub scores: bool,

    #[command(flatten)]
    pub schema: SchemaArgs,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    /// Training CSV
    #[arg(long, value_name = "CSV")]
    pub data: PathBuf,

    #[command(flatten)]
    pub schema: SchemaArgs,

    /// Folds [default: 10]
    #[arg(long)]
    pub folds: Option<usize>,

    /// Score one configuration from the model flags instead of the default grid
    #[arg(long)]
    pub single: bool,

    #[command(flatten)]
    pub params: ModelArgs,

    /// Write the full score table as CSV
    #[arg(long, value_name = "CSV")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Manifest name or path; repeat for several, or `all` for every built-in
    #[arg(long, required = true)]
    pub manifest: Vec<String>,

    /// Directory holding the raw dataset files [default: data]
    #[arg(long, value_name = "DIR")]
    pub data_dir: Option<PathBuf>,

    /// Runs per dataset [default: 30]
    #[arg(long)]
    pub runs: Option<usize>,

    /// Methods to compare [default: all three]
    #[arg(long, value_enum, value_delimiter = ',')]
    pub methods: Option<Vec<MethodArg>>,

    /// Cross-validation folds for tuning [default: 10]
    #[arg(long)]
    pub folds: Option<usize>,

    /// Skip tuning; fit every run with the model flags
    #[arg(long)]
    pub freeze: bool,

    #[command(flatten)]
    pub params: ModelArgs,

    /// Report formats; repeat or comma-separate [default: table]
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Option<Vec<FormatArg>>,

    /// Output path prefix; each format is written to PREFIX.<ext> [default: standard output]
    #[arg(long, value_name = "PREFIX")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Hol,
    NoInterval,
    MidInterval,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Hol => Method::Hol,
            MethodArg::NoInterval => Method::NoInterval,
            MethodArg::MidInterval => Method::MidInterval,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Csv,
    Json,
    Plot,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => ReportFormat::Table,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Plot => ReportFormat::Plot,
        }
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
/// Normal output goes to `out`; diagnostics go to the log and standard error.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render();
            if e.use_stderr() {
                eprint!("{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();

    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let file = match &cli.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    let seed = cli.seed.or(file.seed).unwrap_or(0);
    let jobs = cli.jobs.or(file.jobs);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(HolError::param("--jobs", "must be at least 1"));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| HolError::param("--jobs", e.to_string()))?;
    let ctx = Context { seed, file };
    // output is buffered so the worker pool never touches the caller's handle
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| {
        let sink: &mut dyn Write = &mut buf;
        match cli.command {
            Command::Prepare(a) => ctx.prepare(a, sink),
            Command::Simulate(a) => ctx.simulate(a, sink),
            Command::Train(a) => ctx.train(a, sink),
            Command::Predict(a) => ctx.predict(a, sink),
            Command::Cv(a) => ctx.cv(a, sink),
            Command::Benchmark(a) => ctx.benchmark(a, sink),
        }
    });
    out.write_all(&buf).and_then(|_| out.flush()).map_err(io_err(Path::new("<stdout>")))?;
    result
}

struct Context {
    seed: u64,
    file: RunConfig,
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> HolError + '_ {
    move |e| HolError::io(path, e)
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    std::fs::File::create(path).map(std::io::BufWriter::new).map_err(io_err(path))
}

fn say(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(text).and_then(|_| out.write_all(b"\n")).map_err(io_err(Path::new("<stdout>")))
}

impl Context {
    fn data_dir(&self, flag: &Option<PathBuf>) -> PathBuf {
        flag.clone().or_else(|| self.file.data_dir.clone()).unwrap_or_else(|| PathBuf::from("data"))
    }

    /// Merge model flags over the config file and defaults.
    fn model_config(&self, p: &ModelArgs, n_features: usize) -> Result<(HolConfig, Preprocessing)> {
        let f = &self.file;
        let loss: LossKind = match p.loss.as_ref().or(f.loss.as_ref()) {
            Some(s) => s.parse().map_err(|_| HolError::param("--loss", format!("unknown loss '{s}' (mae, zero_one)")))?,
            None => LossKind::Mae,
        };
        let lambda = p.lambda.or(f.lambda).unwrap_or(1.0);
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(HolError::param("--lambda", format!("must be positive, got {lambda}")));
        }
        let kind = match p.kernel {
            Some(k) => k,
            None => match f.kernel.as_deref() {
                Some(s) => KernelKind::from_str(s, true)
                    .map_err(|_| HolError::param("--kernel", format!("unknown kernel '{s}'")))?,
                None => KernelKind::Rbf,
            },
        };
        let kernel = match kind {
            KernelKind::Linear => KernelSpec::Linear,
            KernelKind::Rbf => KernelSpec::Rbf {
                gamma: p.gamma.or(f.gamma).unwrap_or(1.0 / n_features.max(1) as f64),
            },
            KernelKind::Polynomial => KernelSpec::Polynomial {
                degree: p.degree.or(f.degree).unwrap_or(3),
                coef0: p.coef0.or(f.coef0).unwrap_or(1.0),
            },
        };
        kernel.validate().map_err(|e| match e {
            HolError::InvalidParameter { name, message } => HolError::param(&format!("--{name}"), message),
            other => other,
        })?;
        let tol = p.tol.or(f.tol).unwrap_or(1e-3);
        if tol.is_nan() || tol <= 0.0 {
            return Err(HolError::param("--tol", format!("must be positive, got {tol}")));
        }
        let max_passes = p.max_passes.or(f.max_passes);
        if max_passes == Some(0) {
            return Err(HolError::param("--max-passes", "must be at least 1"));
        }
        let config = HolConfig {
            loss,
            lambda,
            kernel,
            tol,
            max_passes,
        };
        let pre = Preprocessing {
            standardize: !(p.no_standardize || f.no_standardize.unwrap_or(false)),
            screening: (p.screen || f.screen.unwrap_or(false)).then(ScreeningParams::default),
        };
        Ok((config, pre))
    }

    fn folds(&self, flag: Option<usize>) -> usize {
        flag.or(self.file.folds).unwrap_or(10)
    }

    fn prepare(&self, a: PrepareArgs, out: &mut dyn Write) -> Result<i32> {
        let manifest = Manifest::resolve(&a.manifest)?;
        let (full, summary) = manifest.prepare(&self.data_dir(&a.data_dir))?;
        std::fs::create_dir_all(&a.out_dir).map_err(io_err(&a.out_dir))?;
        let path = a.out_dir.join(format!("{}.csv", manifest.name));
        write_dataset_csv(&full, create(&path)?)?;
        say(
            out,
            format_args!(
                "{}: {} rows, {} precise, {} interval, {} excluded -> {}",
                manifest.name,
                summary.rows,
                summary.precise,
                summary.interval,
                summary.excluded,
                path.display()
            ),
        )?;
        if a.split {
            let split = manifest.split(&full, self.seed)?;
            for (part, ds) in [("train", &split.train), ("test", &split.test)] {
                let path = a.out_dir.join(format!("{}-{part}.csv", manifest.name));
                write_dataset_csv(ds, create(&path)?)?;
                say(
                    out,
                    format_args!(
                        "{part}: {} samples ({} precise, {} interval) -> {}",
                        ds.n_samples(),
                        ds.precise_count(),
                        ds.interval_count(),
                        path.display()
                    ),
                )?;
            }
        }
        Ok(EXIT_OK)
    }

    fn simulate(&self, a: SimulateArgs, out: &mut dyn Write) -> Result<i32> {
        let ds = load_csv(&a.input, &a.schema.schema())?;
        let sigma = a.sigma.or(self.file.sigma).unwrap_or(1.0);
        let alignment = match a.alignment {
            AlignmentArg::Centered => BinAlignment::Centered,
            AlignmentArg::Outward => BinAlignment::Outward,
        };
        let params = SimulationParams::new(self.seed).with_sigma(sigma).with_alignment(alignment);
        let sim = simulate_intervals(&ds, &params)?;
        write_dataset_csv(&sim, create(&a.out)?)?;
        say(
            out,
            format_args!("{} precise, {} interval -> {}", sim.precise_count(), sim.interval_count(), a.out.display()),
        )?;
        Ok(EXIT_OK)
    }

    fn train(&self, a: TrainArgs, out: &mut dyn Write) -> Result<i32> {
        let ds = load_csv(&a.data, &a.schema.schema())?;
        let (mut config, pre) = self.model_config(&a.params, ds.n_features())?;
        if a.grid || self.file.grid.unwrap_or(false) {
            let mut grid = default_grid(ds.n_features());
            for c in &mut grid {
                c.tol = config.tol;
                c.max_passes = config.max_passes;
            }
            let result = grid_search_cv(&ds, &grid, self.folds(a.folds), self.seed, &pre)?;
            say(
                out,
                format_args!("grid search: {} (cv error {:.4})", result.best, result.table[result.best_index].mean_error),
            )?;
            config = result.best;
        }
        let model = HolModel::fit_with(&ds, &config, &pre)?;
        model.save(&a.model)?;
        let predicted = model.predict(ds.features())?;
        let hits = predicted.iter().zip(ds.labels()).filter(|(p, l)| l.contains(**p)).count();
        let acc = hits as f64 / ds.n_samples() as f64;
        log::info!("training accuracy {acc}");
        say(out, format_args!("training accuracy: {acc:.4}"))?;
        say(out, format_args!("intercepts: {:?}", model.intercepts()))?;
        say(out, format_args!("model -> {}", a.model.display()))?;
        if !model.converged {
            eprintln!(
                "warning: solver stopped after {} updates before reaching tol {}; the model was written anyway",
                model.iterations, config.tol
            );
            return Ok(EXIT_NOT_CONVERGED);
        }
        Ok(EXIT_OK)
    }

    fn predict(&self, a: PredictArgs, out: &mut dyn Write) -> Result<i32> {
        let model = HolModel::load(&a.model)?;
        let table = Table::from_path(&a.input)?;
        let columns: Vec<String> = match (&a.schema.features, &model.feature_names) {
            (Some(cols), _) => cols.clone(),
            (None, Some(names)) if names.iter().all(|n| table.headers.contains(n)) => names.clone(),
            _ => {
                let reserved = a.schema.reserved();
                table.headers.iter().filter(|h| !reserved.contains(h)).cloned().collect()
            }
        };
        let x = table.numeric_matrix(&columns)?;
        if x.ncols() != model.n_features() {
            return Err(HolError::DimensionMismatch {
                expected: model.n_features(),
                actual: x.ncols(),
            });
        }
        let f = model.decision_values(x.view())?;
        let predicted = model.predict(x.view())?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(create(&a.out)?);
        let mut header = vec!["predicted".to_string()];
        if a.scores {
            header.extend((1..=f.ncols()).map(|k| format!("f{k}")));
        }
        w.write_record(&header)?;
        for (i, p) in predicted.iter().enumerate() {
            let mut record = vec![p.to_string()];
            if a.scores {
                record.extend(f.row(i).iter().map(|v| v.to_string()));
            }
            w.write_record(&record)?;
        }
        w.flush().map_err(io_err(&a.out))?;
        say(out, format_args!("{} predictions -> {}", predicted.len(), a.out.display()))?;
        Ok(EXIT_OK)
    }

    fn cv(&self, a: CvArgs, out: &mut dyn Write) -> Result<i32> {
        let ds = load_csv(&a.data, &a.schema.schema())?;
        let (config, pre) = self.model_config(&a.params, ds.n_features())?;
        let grid = if a.single {
            vec![config]
        } else {
            let mut g = default_grid(ds.n_features());
            for c in &mut g {
                c.tol = config.tol;
                c.max_passes = config.max_passes;
            }
            g
        };
        let result = grid_search_cv(&ds, &grid, self.folds(a.folds), self.seed, &pre)?;
        if let Some(path) = &a.out {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(create(path)?);
            w.write_record(["loss", "lambda", "kernel", "mean_error", "fold_errors"])?;
            for row in &result.table {
                let folds: Vec<String> = row.fold_errors.iter().map(f64::to_string).collect();
                w.write_record([
                    row.config.loss.to_string(),
                    row.config.lambda.to_string(),
                    row.config.kernel.to_string(),
                    row.mean_error.to_string(),
                    folds.join(";"),
                ])?;
            }
            w.flush().map_err(io_err(path))?;
        }
        say(
            out,
            format_args!("best: {} (cv error {:.4})", result.best, result.table[result.best_index].mean_error),
        )?;
        Ok(EXIT_OK)
    }

    fn benchmark(&self, a: BenchmarkArgs, out: &mut dyn Write) -> Result<i32> {
        let names: Vec<String> = if a.manifest.iter().any(|m| m == "all") {
            Manifest::builtin_names().into_iter().map(String::from).collect()
        } else {
            a.manifest.clone()
        };
        // resolve every name first so a typo fails before any work
        let manifests = names.iter().map(|n| Manifest::resolve(n)).collect::<Result<Vec<_>>>()?;
        let data_dir = self.data_dir(&a.data_dir);

        let frozen = if a.freeze || self.file.freeze.unwrap_or(false) {
            Some(self.model_config(&a.params, 1)?)
        } else {
            None
        };
        let methods = match (&a.methods, &self.file.methods) {
            (Some(m), _) => m.iter().map(|&m| Method::from(m)).collect(),
            (None, Some(m)) => m.iter().map(|s| s.parse()).collect::<Result<Vec<Method>>>()?,
            (None, None) => Method::ALL.to_vec(),
        };
        let runs = a.runs.or(self.file.runs).unwrap_or(30);
        let folds = self.folds(a.folds);

        let mut report = BenchmarkReport::default();
        let mut load_failures = 0;
        for manifest in manifests {
            let name = manifest.name.clone();
            let task = match ManifestTask::load(manifest, &data_dir) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {name}: {e}");
                    load_failures += 1;
                    continue;
                }
            };
            // rbf width for a frozen config follows the dataset's width
            let (frozen_config, pre) = match &frozen {
                Some(_) => {
                    let (c, p) = self.model_config(&a.params, task.full.n_features())?;
                    (Some(c), p)
                }
                None => (None, self.model_config(&a.params, task.full.n_features())?.1),
            };
            let options = BenchmarkOptions {
                runs,
                base_seed: self.seed,
                methods: methods.clone(),
                folds,
                grid: None,
                frozen: frozen_config,
                preprocessing: pre,
            };
            report.extend(run_benchmark(&task, &options)?);
        }
        if report.rows.is_empty() {
            return Err(HolError::EmptyDataset("no dataset could be benchmarked".into()));
        }

        let formats: Vec<ReportFormat> = match &a.format {
            Some(f) => f.iter().map(|&f| f.into()).collect(),
            None => match &self.file.formats {
                Some(f) => f.iter().map(|s| s.parse()).collect::<Result<_>>()?,
                None => vec![ReportFormat::Table],
            },
        };
        for format in formats {
            match &a.out {
                Some(prefix) => {
                    let mut path = prefix.clone().into_os_string();
                    path.push(format!(".{}", format.extension()));
                    let path = PathBuf::from(path);
                    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                        std::fs::create_dir_all(parent).map_err(io_err(parent))?;
                    }
                    crate::eval::emit_report(&report, format, &path)?;
                    say(out, format_args!("{format} report -> {}", path.display()))?;
                }
                None => write_report(&report, format, &mut *out)?,
            }
        }

        let failures = report.failure_count() + load_failures;
        if failures > 0 {
            eprintln!("warning: {failures} benchmark run(s) or dataset(s) failed; see the report");
            return Ok(EXIT_PARTIAL);
        }
        Ok(EXIT_OK)
    }
}
