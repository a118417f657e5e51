//! The user-facing estimator, hyperparameter search and the two
//! label-handling baselines.

mod baselines;
mod grid;

use std::io::{Read, Write};
use std::sync::Arc;

use ndarray::{ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::data::{screen_features, OrdinalDataset, ScreeningParams, Standardizer};
use crate::error::{HolError, Result};
use crate::kernel::{gram_symmetric, KernelSpec};
use crate::loss::LossKind;
use crate::solver::{recover_intercepts, solve_smo, DualProblem, FittedScorer, SmoOptions};

pub use baselines::{to_mid_interval, to_no_interval};
pub use grid::{default_grid, grid_search_cv, CvRow, GridSearchResult};

/// Version written into every model file.
pub const MODEL_SCHEMA_VERSION: u32 = 1;

fn default_tol() -> f64 {
    1e-3
}

/// Hyperparameters of one fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolConfig {
    pub loss: LossKind,
    /// Upper bound on each dual variable; larger means less regularization.
    pub lambda: f64,
    pub kernel: KernelSpec,
    /// Optimality-gap tolerance of the dual solver.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Pair-update cap of the dual solver; `None` means ten per variable.
    #[serde(default)]
    pub max_passes: Option<usize>,
}

impl std::fmt::Display for HolConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "loss={} lambda={} kernel={}", self.loss, self.lambda, self.kernel)
    }
}

impl HolConfig {
    pub fn new(loss: LossKind, lambda: f64, kernel: KernelSpec) -> Self {
        HolConfig {
            loss,
            lambda,
            kernel,
            tol: default_tol(),
            max_passes: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(HolError::param("lambda", format!("must be positive, got {}", self.lambda)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(HolError::param("tol", format!("must be positive, got {}", self.tol)));
        }
        if self.max_passes == Some(0) {
            return Err(HolError::param("max_passes", "must be at least 1"));
        }
        self.kernel.validate()
    }

    pub(crate) fn smo_options(&self) -> SmoOptions {
        SmoOptions {
            tol: self.tol,
            max_passes: self.max_passes,
        }
    }
}

/// Feature transforms learned at fit time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preprocessing {
    /// Scale features to zero mean and unit population variance.
    pub standardize: bool,
    /// Drop redundant features before standardizing.
    pub screening: Option<ScreeningParams>,
}

impl Default for Preprocessing {
    fn default() -> Self {
        Preprocessing {
            standardize: true,
            screening: None,
        }
    }
}

/// Feature selection plus standardization, fitted on training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureTransform {
    pub n_input_features: usize,
    /// Retained input columns, in order.
    pub selected: Vec<usize>,
    /// Applied to the retained columns.
    pub standardizer: Standardizer,
}

impl FeatureTransform {
    pub fn fit(x: ArrayView2<'_, f64>, pre: &Preprocessing) -> Result<Self> {
        let selected = match &pre.screening {
            Some(params) => screen_features(x, params)?,
            None => (0..x.ncols()).collect(),
        };
        let standardizer = if pre.standardize {
            Standardizer::fit(x.select(Axis(1), &selected).view())?
        } else {
            Standardizer::identity(selected.len())
        };
        Ok(FeatureTransform {
            n_input_features: x.ncols(),
            selected,
            standardizer,
        })
    }

    pub fn apply(&self, x: ArrayView2<'_, f64>) -> Result<ndarray::Array2<f64>> {
        if x.ncols() != self.n_input_features {
            return Err(HolError::DimensionMismatch {
                expected: self.n_input_features,
                actual: x.ncols(),
            });
        }
        self.standardizer.transform(x.select(Axis(1), &self.selected).view())
    }

    pub fn apply_dataset(&self, ds: &OrdinalDataset) -> Result<OrdinalDataset> {
        let names = ds
            .feature_names()
            .map(|n| self.selected.iter().map(|&j| n[j].clone()).collect());
        ds.with_features(self.apply(ds.features())?, names)
    }
}

/// A fitted ordinal classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolModel {
    pub schema_version: u32,
    pub config: HolConfig,
    pub n_classes: u32,
    pub transform: FeatureTransform,
    pub scorer: FittedScorer,
    /// Intercepts before any monotone projection.
    pub raw_intercepts: Vec<f64>,
    /// Whether the dual solver reached its tolerance.
    pub converged: bool,
    pub iterations: usize,
    #[serde(default)]
    pub feature_names: Option<Vec<String>>,
}

/// Solve the dual on an already-transformed dataset with a precomputed Gram
/// matrix. Returns the scorer, raw intercepts, convergence flag and
/// iteration count.
pub(crate) fn fit_on_gram(
    features: ArrayView2<'_, f64>,
    labels: &[crate::data::LabelInterval],
    n_classes: u32,
    gram: Arc<ndarray::Array2<f64>>,
    config: &HolConfig,
) -> Result<(FittedScorer, Vec<f64>, bool, usize)> {
    let problem = DualProblem::new(gram, labels, n_classes, config.lambda, config.loss)?;
    if problem.n_vars() == 0 {
        return Err(HolError::NoTrainableVariables);
    }
    let solution = solve_smo(&problem, &config.smo_options());
    let intercepts = recover_intercepts(&problem, &solution)?;
    let scorer = FittedScorer::from_solution(&problem, &solution, features, config.kernel, intercepts.values);
    Ok((scorer, intercepts.raw, solution.converged, solution.iterations))
}

impl HolModel {
    /// Standardize, then fit.
    pub fn fit(dataset: &OrdinalDataset, config: &HolConfig) -> Result<Self> {
        Self::fit_with(dataset, config, &Preprocessing::default())
    }

    pub fn fit_with(dataset: &OrdinalDataset, config: &HolConfig, pre: &Preprocessing) -> Result<Self> {
        config.validate()?;
        if dataset.is_empty() {
            return Err(HolError::EmptyDataset("cannot fit on zero samples".into()));
        }
        let transform = FeatureTransform::fit(dataset.features(), pre)?;
        let x = transform.apply(dataset.features())?;
        let gram = Arc::new(gram_symmetric(x.view(), &config.kernel)?);
        let (scorer, raw, converged, iterations) =
            fit_on_gram(x.view(), dataset.labels(), dataset.n_classes(), gram, config)?;
        if !converged {
            log::warn!("solver stopped after {iterations} pair updates without reaching tol {}", config.tol);
        }
        if config.loss == LossKind::Mae && raw.windows(2).any(|w| w[0] > w[1] + 1e-6) {
            log::warn!("MAE intercepts are not monotone: {raw:?}");
        }
        Ok(HolModel {
            schema_version: MODEL_SCHEMA_VERSION,
            config: *config,
            n_classes: dataset.n_classes(),
            transform,
            scorer,
            raw_intercepts: raw,
            converged,
            iterations,
            feature_names: dataset.feature_names().map(<[String]>::to_vec),
        })
    }

    pub fn n_features(&self) -> usize {
        self.transform.n_input_features
    }

    pub fn intercepts(&self) -> &[f64] {
        &self.scorer.intercepts
    }

    /// `f_k(x)` for every row (columns `k = 1..K−1`).
    pub fn decision_values(&self, x: ArrayView2<'_, f64>) -> Result<ndarray::Array2<f64>> {
        let xt = self.transform.apply(x)?;
        self.scorer.decision_values(xt.view())
    }

    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<u32>> {
        let xt = self.transform.apply(x)?;
        self.scorer.predict(xt.view())
    }

    pub fn to_writer<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self).map_err(|e| HolError::ModelFormat(e.to_string()))
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let model: HolModel = serde_json::from_reader(reader).map_err(|e| HolError::ModelFormat(e.to_string()))?;
        if model.schema_version != MODEL_SCHEMA_VERSION {
            return Err(HolError::ModelFormat(format!(
                "unsupported schema_version {} (expected {MODEL_SCHEMA_VERSION})",
                model.schema_version
            )));
        }
        Ok(model)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut file = std::fs::File::create(path).map_err(|e| HolError::io(path, e))?;
        self.to_writer(&mut file)?;
        file.write_all(b"\n").map_err(|e| HolError::io(path, e))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| HolError::io(path, e))?;
        Self::from_reader(std::io::BufReader::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{synthetic, LabelInterval};
    use ndarray::{array, concatenate, Array2};

    fn rbf() -> KernelSpec {
        KernelSpec::Rbf { gamma: 1.0 }
    }

    #[test]
    fn separable_clusters_fit_perfectly() {
        let ds = synthetic::separable_clusters(15, 1);
        for loss in [LossKind::Mae, LossKind::ZeroOne] {
            let m = HolModel::fit(&ds, &HolConfig::new(loss, 10.0, rbf())).unwrap();
            let pred = m.predict(ds.features()).unwrap();
            let truth: Vec<u32> = ds.labels().iter().map(|l| l.lo()).collect();
            assert_eq!(pred, truth);
            assert!(m.intercepts().windows(2).all(|w| w[0] <= w[1]));
            let lin = HolModel::fit(&ds, &HolConfig::new(loss, 10.0, KernelSpec::Linear)).unwrap();
            assert_eq!(lin.predict(array![[-10.0], [10.0]].view()).unwrap(), vec![1, 3]);
        }
    }

    #[test]
    fn fully_ambiguous_sample_changes_nothing() {
        let ds = synthetic::separable_clusters(6, 2);
        let cfg = HolConfig::new(LossKind::Mae, 1.0, rbf());
        let pre = Preprocessing {
            standardize: false,
            screening: None,
        };
        let base = HolModel::fit_with(&ds, &cfg, &pre).unwrap();
        let x = concatenate![Axis(0), ds.features(), array![[0.7]]];
        let mut labels = ds.labels().to_vec();
        labels.push(LabelInterval::new(1, 3).unwrap());
        let more = OrdinalDataset::new(x, labels, 3).unwrap();
        let fit = HolModel::fit_with(&more, &cfg, &pre).unwrap();
        assert_eq!(fit.scorer.coef, base.scorer.coef);
        assert_eq!(fit.scorer.intercepts, base.scorer.intercepts);
    }

    #[test]
    fn all_ambiguous_dataset_is_rejected() {
        let ds = OrdinalDataset::new(Array2::zeros((3, 1)), vec![LabelInterval::new(1, 2).unwrap(); 3], 2).unwrap();
        let err = HolModel::fit(&ds, &HolConfig::new(LossKind::Mae, 1.0, KernelSpec::Linear)).unwrap_err();
        assert!(matches!(err, HolError::NoTrainableVariables));
    }

    #[test]
    fn single_sample_memorized() {
        let ds = OrdinalDataset::new(array![[0.3, 0.1]], vec![LabelInterval::precise(2)], 3).unwrap();
        let m = HolModel::fit(&ds, &HolConfig::new(LossKind::Mae, 1.0, rbf())).unwrap();
        assert_eq!(m.predict(ds.features()).unwrap(), vec![2]);
    }

    #[test]
    fn screened_constant_column_does_not_matter() {
        let ds = synthetic::radial_rings(10, 3);
        let with_const = concatenate![Axis(1), ds.features(), Array2::from_elem((30, 1), 5.0)];
        let ds2 = ds.with_features(with_const, None).unwrap();
        let cfg = HolConfig::new(LossKind::Mae, 10.0, rbf());
        let pre = Preprocessing {
            standardize: true,
            screening: Some(ScreeningParams::default()),
        };
        let a = HolModel::fit(&ds, &cfg).unwrap();
        let b = HolModel::fit_with(&ds2, &cfg, &pre).unwrap();
        assert_eq!(b.transform.selected, vec![0, 1]);
        let probe = array![[0.1, 0.2], [2.0, -1.0], [3.5, 0.0]];
        let probe2 = concatenate![Axis(1), probe, array![[1.0], [2.0], [3.0]]];
        assert_eq!(a.predict(probe.view()).unwrap(), b.predict(probe2.view()).unwrap());
        assert!(b.predict(probe.view()).is_err());
    }

    #[test]
    fn model_file_round_trip() {
        let ds = synthetic::random_hybrid(30, 3, 4, 0.3, 5);
        let m = HolModel::fit(&ds, &HolConfig::new(LossKind::ZeroOne, 1.0, rbf())).unwrap();
        let mut buf = Vec::new();
        m.to_writer(&mut buf).unwrap();
        let back = HolModel::from_reader(buf.as_slice()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.decision_values(ds.features()).unwrap(), m.decision_values(ds.features()).unwrap());
        let mut again = Vec::new();
        back.to_writer(&mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn invalid_config() {
        let ds = synthetic::separable_clusters(3, 1);
        assert!(HolModel::fit(&ds, &HolConfig::new(LossKind::Mae, -1.0, rbf())).is_err());
        assert!(HolModel::fit(&ds, &HolConfig::new(LossKind::Mae, 1.0, KernelSpec::Rbf { gamma: -1.0 })).is_err());
    }
}
