use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{compute_metrics, MetricSet};
use crate::data::manifest::SplitData;
use crate::data::{Manifest, OrdinalDataset};
use crate::error::{HolError, Result};
use crate::model::{default_grid, grid_search_cv, to_mid_interval, to_no_interval, HolConfig, HolModel, Preprocessing};

/// How interval-labeled training samples are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Train on precise and interval labels together.
    Hol,
    /// Drop interval-labeled samples.
    NoInterval,
    /// Collapse each interval to its middle class.
    MidInterval,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Hol, Method::NoInterval, Method::MidInterval];

    /// Reduce a training set the way this method sees it.
    pub fn training_set(&self, train: &OrdinalDataset, seed: u64) -> Result<OrdinalDataset> {
        match self {
            Method::Hol => Ok(train.clone()),
            Method::NoInterval => to_no_interval(train),
            Method::MidInterval => to_mid_interval(train, seed),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Hol => "HOL",
            Method::NoInterval => "HOL/no-interval",
            Method::MidInterval => "HOL/mid-interval",
        })
    }
}

impl FromStr for Method {
    type Err = HolError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "hol" => Ok(Method::Hol),
            "no-interval" | "hol/no-interval" => Ok(Method::NoInterval),
            "mid-interval" | "hol/mid-interval" => Ok(Method::MidInterval),
            _ => Err(HolError::param(
                "method",
                format!("unknown method '{s}' (expected hol, no-interval or mid-interval)"),
            )),
        }
    }
}

/// A source of seeded train/test splits.
pub trait BenchmarkTask: Sync {
    fn name(&self) -> &str;

    /// Training and (precise) test sets for one run.
    fn split(&self, seed: u64) -> Result<SplitData>;
}

/// A dataset manifest together with its prepared full table.
#[derive(Debug, Clone)]
pub struct ManifestTask {
    pub manifest: Manifest,
    pub full: OrdinalDataset,
}

impl ManifestTask {
    pub fn load(manifest: Manifest, data_dir: &Path) -> Result<Self> {
        let (full, summary) = manifest.prepare(data_dir)?;
        log::info!(
            "{}: {} rows, {} precise, {} interval, {} excluded",
            manifest.name,
            summary.rows,
            summary.precise,
            summary.interval,
            summary.excluded
        );
        Ok(ManifestTask { manifest, full })
    }
}

impl BenchmarkTask for ManifestTask {
    fn name(&self) -> &str {
        &self.manifest.name
    }

    fn split(&self, seed: u64) -> Result<SplitData> {
        self.manifest.split(&self.full, seed)
    }
}

/// A named closure producing splits, for synthetic benchmarks.
pub struct FnTask<F> {
    pub name: String,
    pub make: F,
}

impl<F: Fn(u64) -> Result<SplitData> + Sync> BenchmarkTask for FnTask<F> {
    fn name(&self) -> &str {
        &self.name
    }

    fn split(&self, seed: u64) -> Result<SplitData> {
        (self.make)(seed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOptions {
    pub runs: usize,
    /// Run `r` uses seed `base_seed + r`.
    pub base_seed: u64,
    pub methods: Vec<Method>,
    pub folds: usize,
    /// Tuning grid; `None` uses [`default_grid`] for the feature count.
    pub grid: Option<Vec<HolConfig>>,
    /// Skip tuning and fit every run with this configuration.
    pub frozen: Option<HolConfig>,
    pub preprocessing: Preprocessing,
}

impl Default for BenchmarkOptions {
    fn default() -> Self {
        BenchmarkOptions {
            runs: 30,
            base_seed: 0,
            methods: Method::ALL.to_vec(),
            folds: 10,
            grid: None,
            frozen: None,
            preprocessing: Preprocessing::default(),
        }
    }
}

/// Outcome of one (run, method) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub method: Method,
    /// Present when the run succeeded.
    pub metrics: Option<MetricSet>,
    pub config: Option<HolConfig>,
    pub error: Option<String>,
}

/// Per-run values for one (dataset, method) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dataset: String,
    pub method: Method,
    /// Seeds of the successful runs, aligned with the metric arrays.
    pub seeds: Vec<u64>,
    pub overall_acc: Vec<f64>,
    pub avg_class_acc: Vec<f64>,
    pub mean_abs_deviation: Vec<f64>,
    /// Selected configuration of each successful run, as `loss=… lambda=… kernel=…`.
    pub configs: Vec<String>,
    /// `(seed, message)` of each failed run.
    pub failures: Vec<(u64, String)>,
}

/// Mean and sample standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl ReportRow {
    pub fn runs(&self) -> usize {
        self.seeds.len()
    }

    /// The most frequently selected configuration; ties go to the one
    /// selected first.
    pub fn best_config_mode(&self) -> String {
        let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for (pos, c) in self.configs.iter().enumerate() {
            counts.entry(c).or_insert((0, pos)).0 += 1;
        }
        counts
            .into_iter()
            .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(b.1 .1.cmp(&a.1 .1)))
            .map(|(c, _)| c.to_string())
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub rows: Vec<ReportRow>,
}

impl BenchmarkReport {
    pub fn failure_count(&self) -> usize {
        self.rows.iter().map(|r| r.failures.len()).sum()
    }

    pub fn row(&self, dataset: &str, method: Method) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.dataset == dataset && r.method == method)
    }

    pub fn extend(&mut self, other: BenchmarkReport) {
        self.rows.extend(other.rows);
    }
}

fn run_one(task: &dyn BenchmarkTask, split: &SplitData, method: Method, seed: u64, options: &BenchmarkOptions) -> Result<(MetricSet, HolConfig)> {
    let train = method.training_set(&split.train, seed)?;
    let config = match (&options.frozen, &options.grid) {
        (Some(c), _) => *c,
        (None, Some(grid)) => grid_search_cv(&train, grid, options.folds, seed, &options.preprocessing)?.best,
        (None, None) => {
            let grid = default_grid(train.n_features());
            grid_search_cv(&train, &grid, options.folds, seed, &options.preprocessing)?.best
        }
    };
    let model = HolModel::fit_with(&train, &config, &options.preprocessing)?;
    let predicted = model.predict(split.test.features())?;
    let truth: Vec<u32> = split
        .test
        .labels()
        .iter()
        .map(|l| {
            if l.is_precise() {
                Ok(l.lo())
            } else {
                Err(HolError::param("test set", format!("{}: test labels must be precise", task.name())))
            }
        })
        .collect::<Result<_>>()?;
    Ok((compute_metrics(&predicted, &truth, split.test.n_classes())?, config))
}

/// Repeat split → (reduce labels →) tune → refit → score for every run and
/// method. Failed runs are recorded in the report rather than aborting it.
pub fn run_benchmark(task: &dyn BenchmarkTask, options: &BenchmarkOptions) -> Result<BenchmarkReport> {
    if options.runs == 0 {
        return Err(HolError::param("runs", "must be at least 1"));
    }
    if options.methods.is_empty() {
        return Err(HolError::param("methods", "must name at least one method"));
    }
    let records: Vec<RunRecord> = (0..options.runs)
        .into_par_iter()
        .flat_map_iter(|run| {
            let seed = options.base_seed + run as u64;
            let split = task.split(seed);
            options
                .methods
                .iter()
                .map(|&method| {
                    let outcome = split.as_ref().map_err(|e| e.to_string()).and_then(|s| {
                        run_one(task, s, method, seed, options).map_err(|e| e.to_string())
                    });
                    match outcome {
                        Ok((metrics, config)) => {
                            log::info!(
                                "{} run {run} {method}: acc {:.4} ({})",
                                task.name(),
                                metrics.overall_acc,
                                config
                            );
                            RunRecord {
                                run,
                                seed,
                                method,
                                metrics: Some(metrics),
                                config: Some(config),
                                error: None,
                            }
                        }
                        Err(message) => {
                            log::error!("{} run {run} {method} failed: {message}", task.name());
                            RunRecord {
                                run,
                                seed,
                                method,
                                metrics: None,
                                config: None,
                                error: Some(message),
                            }
                        }
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(assemble(task.name(), &options.methods, &records))
}

/// Group run records into one row per method, in run order.
pub fn assemble(dataset: &str, methods: &[Method], records: &[RunRecord]) -> BenchmarkReport {
    let rows = methods
        .iter()
        .map(|&method| {
            let mut row = ReportRow {
                dataset: dataset.to_string(),
                method,
                seeds: Vec::new(),
                overall_acc: Vec::new(),
                avg_class_acc: Vec::new(),
                mean_abs_deviation: Vec::new(),
                configs: Vec::new(),
                failures: Vec::new(),
            };
            let mut mine: Vec<&RunRecord> = records.iter().filter(|r| r.method == method).collect();
            mine.sort_by_key(|r| r.run);
            for r in mine {
                match (&r.metrics, &r.config) {
                    (Some(m), Some(c)) => {
                        row.seeds.push(r.seed);
                        row.overall_acc.push(m.overall_acc);
                        row.avg_class_acc.push(m.avg_class_acc);
                        row.mean_abs_deviation.push(m.mean_abs_deviation);
                        row.configs.push(c.to_string());
                    }
                    _ => row.failures.push((r.seed, r.error.clone().unwrap_or_default())),
                }
            }
            row
        })
        .collect();
    BenchmarkReport { rows }
}
