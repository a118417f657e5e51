use nalgebra::DMatrix;
use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{HolError, Result};

const RIDGE: f64 = 1e-8;
const TIE: f64 = 1e-6;

/// Thresholds for recursive redundancy elimination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScreeningParams {
    /// Remove a feature whose largest absolute partial correlation with any
    /// other remaining feature exceeds this.
    pub corr_threshold: f64,
    /// Remove a feature whose relative absolute error, when linearly
    /// regressed on the other remaining features, is below this.
    pub rae_threshold: f64,
}

impl Default for ScreeningParams {
    fn default() -> Self {
        ScreeningParams {
            corr_threshold: 0.95,
            rae_threshold: 0.05,
        }
    }
}

/// Redundancy statistics for the columns of one screening pass.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Redundancy {
    pub max_partial_corr: Vec<f64>,
    /// `None` when there are too few rows to regress.
    pub rae: Option<Vec<f64>>,
}

fn redundancy(x: ArrayView2<'_, f64>, cols: &[usize]) -> Result<Redundancy> {
    let n = x.nrows();
    let m = cols.len();
    let mut z = DMatrix::<f64>::zeros(n, m);
    for (c, &j) in cols.iter().enumerate() {
        let col = x.column(j);
        let mean = col.sum() / n as f64;
        let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        if sd > 0.0 {
            for i in 0..n {
                z[(i, c)] = (col[i] - mean) / sd;
            }
        }
    }
    let mut corr = z.transpose() * &z / n as f64;
    for c in 0..m {
        corr[(c, c)] += RIDGE;
    }
    let p = corr
        .cholesky()
        .ok_or_else(|| HolError::param("features", "correlation matrix is not positive definite"))?
        .inverse();

    let max_partial_corr = (0..m)
        .map(|a| {
            (0..m)
                .filter(|&b| b != a)
                .map(|b| (p[(a, b)] / (p[(a, a)] * p[(b, b)]).sqrt()).abs())
                .fold(0.0, f64::max)
        })
        .collect();

    let rae = if n > m {
        Some(
            (0..m)
                .map(|c| {
                    let denom: f64 = z.column(c).iter().map(|v| v.abs()).sum();
                    if denom == 0.0 {
                        return 0.0;
                    }
                    let resid = &z * p.column(c) / p[(c, c)];
                    resid.iter().map(|v| v.abs()).sum::<f64>() / denom
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(Redundancy { max_partial_corr, rae })
}

/// Recursive feature elimination by redundancy. Each pass removes the one
/// feature, among those exceeding either threshold, with the highest
/// redundancy score `max(partial corr, 1 − RAE)` (ties go to the highest
/// column index). Constant columns are always redundant. Returns the
/// retained column indices in their original order.
pub fn screen_features(x: ArrayView2<'_, f64>, params: &ScreeningParams) -> Result<Vec<usize>> {
    let mut keep: Vec<usize> = (0..x.ncols()).collect();
    let mut warned = false;
    while keep.len() > 1 {
        let stats = redundancy(x, &keep)?;
        if stats.rae.is_none() && !warned {
            log::warn!(
                "feature screening: {} rows for {} features; regression criterion skipped",
                x.nrows(),
                keep.len()
            );
            warned = true;
        }
        let mut victim: Option<(usize, f64)> = None;
        for (c, &j) in keep.iter().enumerate() {
            let pc = stats.max_partial_corr[c];
            let rae = stats.rae.as_ref().map(|r| r[c]);
            let constant = x.column(j).iter().all(|&v| v == x[[0, j]]);
            let fires = constant || pc > params.corr_threshold || rae.is_some_and(|r| r < params.rae_threshold);
            if !fires {
                continue;
            }
            let score = if constant {
                f64::INFINITY
            } else {
                pc.max(rae.map_or(0.0, |r| 1.0 - r))
            };
            if victim.is_none_or(|(_, best)| score >= best - TIE) {
                victim = Some((c, score));
            }
        }
        match victim {
            Some((c, _)) => {
                log::debug!("feature screening removes column {}", keep[c]);
                keep.remove(c);
            }
            None => break,
        }
    }
    Ok(keep)
}
