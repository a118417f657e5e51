use std::sync::Arc;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FeatureTransform, HolConfig, Preprocessing};
use crate::data::{group_kfold, screen_features, OrdinalDataset};
use crate::error::{HolError, Result};
use crate::kernel::{gram, gram_symmetric, KernelSpec};
use crate::loss::{predict_label, LossKind};
use crate::solver::{recover_intercepts, solve_smo, DualProblem};

/// Errors closer than this are treated as tied.
const TIE_EPS: f64 = 1e-12;

/// Cross-validated score of one grid entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvRow {
    pub config: HolConfig,
    pub mean_error: f64,
    pub fold_errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best: HolConfig,
    /// Position of `best` in the grid.
    pub best_index: usize,
    /// One row per grid entry, in grid order.
    pub table: Vec<CvRow>,
}

/// The default search space for `d` input features: both losses, a linear
/// kernel and RBF kernels with `gamma ∈ {0.5/d, 1/d, 2/d}`, and
/// `lambda ∈ {0.01, 0.1, 1, 10, 100}` — 40 configurations.
pub fn default_grid(d: usize) -> Vec<HolConfig> {
    let d = d.max(1) as f64;
    let kernels = [
        KernelSpec::Linear,
        KernelSpec::Rbf { gamma: 0.5 / d },
        KernelSpec::Rbf { gamma: 1.0 / d },
        KernelSpec::Rbf { gamma: 2.0 / d },
    ];
    let mut grid = Vec::with_capacity(40);
    for loss in [LossKind::Mae, LossKind::ZeroOne] {
        for kernel in kernels {
            for lambda in [0.01, 0.1, 1.0, 10.0, 100.0] {
                grid.push(HolConfig::new(loss, lambda, kernel));
            }
        }
    }
    grid
}

/// Validation error of one fitted cell: the fraction of validation samples
/// whose prediction falls outside their label interval.
fn cell_error(
    config: &HolConfig,
    train: &OrdinalDataset,
    gram_train: &Arc<Array2<f64>>,
    cross: &Array2<f64>,
    validation: &OrdinalDataset,
) -> Result<f64> {
    let problem = DualProblem::new(gram_train.clone(), train.labels(), train.n_classes(), config.lambda, config.loss)?;
    if problem.n_vars() == 0 {
        return Err(HolError::NoTrainableVariables);
    }
    let solution = solve_smo(&problem, &config.smo_options());
    let b = recover_intercepts(&problem, &solution)?.values;
    let beta = ndarray::Array1::from(problem.sample_coefficients(&solution.alpha));
    let h = cross.dot(&beta);
    let misses = validation
        .labels()
        .iter()
        .zip(h.iter())
        .filter(|(label, &h)| {
            let f: Vec<f64> = b.iter().map(|bk| h + bk).collect();
            !label.contains(predict_label(&f))
        })
        .count();
    Ok(misses as f64 / validation.n_samples() as f64)
}

/// Score every configuration by grouped k-fold cross-validation and pick the
/// one with the lowest mean validation error.
///
/// A validation sample counts as correct when the prediction lies inside its
/// label interval. Screening (if configured) is unsupervised and runs once
/// on the whole dataset; standardization is refitted on each training fold.
/// Kernel matrices are computed once per (fold, kernel) and shared by every
/// `lambda` and loss. Ties within `1e-12` go to the smaller `lambda`, then the
/// simpler kernel, then the earlier grid entry.
pub fn grid_search_cv(
    dataset: &OrdinalDataset,
    grid: &[HolConfig],
    folds: usize,
    seed: u64,
    pre: &Preprocessing,
) -> Result<GridSearchResult> {
    if grid.is_empty() {
        return Err(HolError::param("grid", "must contain at least one configuration"));
    }
    for config in grid {
        config.validate()?;
    }
    let dataset = match &pre.screening {
        Some(params) => dataset.select_features(&screen_features(dataset.features(), params)?),
        None => dataset.clone(),
    };
    let splits = group_kfold(&dataset, folds, seed)?;
    let fold_pre = Preprocessing {
        standardize: pre.standardize,
        screening: None,
    };

    let mut kernels: Vec<KernelSpec> = Vec::new();
    for c in grid {
        if !kernels.contains(&c.kernel) {
            kernels.push(c.kernel);
        }
    }

    // errors[fold][config]
    let errors: Vec<Vec<f64>> = splits
        .par_iter()
        .map(|fold| -> Result<Vec<f64>> {
            let train = dataset.subset(&fold.train);
            let validation = dataset.subset(&fold.validation);
            let transform = FeatureTransform::fit(train.features(), &fold_pre)?;
            let xt = transform.apply(train.features())?;
            let xv = transform.apply(validation.features())?;
            let mut out = vec![f64::NAN; grid.len()];
            for kernel in &kernels {
                let g = Arc::new(gram_symmetric(xt.view(), kernel)?);
                let cross = gram(xv.view(), xt.view(), kernel)?;
                let cells: Vec<(usize, Result<f64>)> = grid
                    .par_iter()
                    .enumerate()
                    .filter(|(_, c)| c.kernel == *kernel)
                    .map(|(idx, c)| (idx, cell_error(c, &train, &g, &cross, &validation)))
                    .collect();
                for (idx, e) in cells {
                    out[idx] = e?;
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let table: Vec<CvRow> = grid
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let fold_errors: Vec<f64> = errors.iter().map(|f| f[idx]).collect();
            CvRow {
                config: *c,
                mean_error: fold_errors.iter().sum::<f64>() / fold_errors.len() as f64,
                fold_errors,
            }
        })
        .collect();

    let mut best_index = 0;
    for idx in 1..table.len() {
        if better(&table[idx], &table[best_index]) {
            best_index = idx;
        }
    }
    log::debug!(
        "grid search picked {} (cv error {:.4})",
        table[best_index].config,
        table[best_index].mean_error
    );
    Ok(GridSearchResult {
        best: table[best_index].config,
        best_index,
        table,
    })
}

// strict preference of `a` over an earlier row `b`
fn better(a: &CvRow, b: &CvRow) -> bool {
    if (a.mean_error - b.mean_error).abs() > TIE_EPS {
        return a.mean_error < b.mean_error;
    }
    if a.config.lambda != b.config.lambda {
        return a.config.lambda < b.config.lambda;
    }
    a.config.kernel.rank() < b.config.kernel.rank()
}
