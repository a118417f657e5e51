use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use super::{DualProblem, DualSolution};
use crate::error::{HolError, Result};
use crate::kernel::{gram, KernelSpec};
use crate::loss::{predict_label, LossKind};

const FREE_EPS: f64 = 1e-8;

/// Unweighted isotonic (non-decreasing) least-squares fit by
/// pool-adjacent-violators.
pub fn pav_nondecreasing(values: &[f64]) -> Vec<f64> {
    // blocks of (mean, size)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (m2, n2) = blocks[blocks.len() - 1];
            let (m1, n1) = blocks[blocks.len() - 2];
            if m1 <= m2 {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            blocks.push(((m1 * n1 as f64 + m2 * n2 as f64) / (n1 + n2) as f64, n1 + n2));
        }
    }
    blocks.into_iter().flat_map(|(m, n)| std::iter::repeat_n(m, n)).collect()
}

/// Threshold intercepts before and after any monotone projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Intercepts {
    /// As recovered from the optimality conditions (after filling empty
    /// thresholds).
    pub raw: Vec<f64>,
    /// The values used for prediction.
    pub values: Vec<f64>,
    /// 0-based thresholds that had no dual variable.
    pub empty: Vec<usize>,
}

/// Recover `b_k` for every threshold.
///
/// Free variables pin `b_k = z − h(x_i)` exactly; their mean is used. A
/// threshold without free variables takes the midpoint of the interval
/// allowed by its bound variables. Thresholds without variables are
/// interpolated linearly from their nearest neighbours (flat beyond the
/// ends). Under the 0/1 loss the result is projected onto non-decreasing
/// order; under MAE it is left as is.
pub fn recover_intercepts(problem: &DualProblem, solution: &DualSolution) -> Result<Intercepts> {
    let lambda = problem.lambda();
    let s = &solution.scores;
    let n_t = problem.n_thresholds();
    let mut raw: Vec<Option<f64>> = Vec::with_capacity(n_t);
    for k in 0..n_t {
        let (mut free_sum, mut free_n) = (0.0, 0usize);
        let mut lower = f64::NEG_INFINITY;
        let mut upper = f64::INFINITY;
        for u in problem.block(k) {
            let v = problem.vars()[u];
            let a = solution.alpha[u];
            let candidate = v.z - s[v.i];
            if a > FREE_EPS * lambda && a < lambda * (1.0 - FREE_EPS) {
                free_sum += candidate;
                free_n += 1;
            } else if (a <= FREE_EPS * lambda) == (v.z > 0.0) {
                // α = 0 with z = +1, or α = λ with z = −1
                lower = lower.max(candidate);
            } else {
                upper = upper.min(candidate);
            }
        }
        raw.push(if free_n > 0 {
            Some(free_sum / free_n as f64)
        } else if lower.is_finite() && upper.is_finite() {
            Some(0.5 * (lower + upper))
        } else if lower.is_finite() {
            Some(lower)
        } else if upper.is_finite() {
            Some(upper)
        } else {
            None
        });
    }

    let empty: Vec<usize> = (0..n_t).filter(|&k| raw[k].is_none()).collect();
    let known: Vec<usize> = (0..n_t).filter(|&k| raw[k].is_some()).collect();
    if known.is_empty() {
        return Err(HolError::NoTrainableVariables);
    }
    let filled: Vec<f64> = (0..n_t)
        .map(|k| match raw[k] {
            Some(b) => b,
            None => {
                let left = known.iter().rev().find(|&&j| j < k).copied();
                let right = known.iter().find(|&&j| j > k).copied();
                match (left, right) {
                    (Some(l), Some(r)) => {
                        let (bl, br) = (raw[l].unwrap(), raw[r].unwrap());
                        bl + (br - bl) * (k - l) as f64 / (r - l) as f64
                    }
                    (Some(l), None) => raw[l].unwrap(),
                    (None, Some(r)) => raw[r].unwrap(),
                    (None, None) => unreachable!("known is non-empty"),
                }
            }
        })
        .collect();

    let values = match problem.kind() {
        LossKind::ZeroOne => pav_nondecreasing(&filled),
        LossKind::Mae => {
            if filled.windows(2).any(|w| w[0] > w[1] + 1e-6) {
                log::debug!("MAE intercepts are not monotone: {filled:?}");
            }
            filled.clone()
        }
    };
    Ok(Intercepts {
        raw: filled,
        values,
        empty,
    })
}

/// The fitted ranking functions `f_k(x) = Σ_j c_j k(x_j, x) + b_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedScorer {
    pub kernel: KernelSpec,
    /// Training rows with a nonzero coefficient.
    pub support: Array2<f64>,
    /// Aggregated `Σ_k α z` of each support row.
    pub coef: Vec<f64>,
    pub intercepts: Vec<f64>,
}

impl FittedScorer {
    /// Keep the training rows whose aggregated coefficient is nonzero.
    pub fn from_solution(
        problem: &DualProblem,
        solution: &DualSolution,
        features: ArrayView2<'_, f64>,
        kernel: KernelSpec,
        intercepts: Vec<f64>,
    ) -> Self {
        let beta = problem.sample_coefficients(&solution.alpha);
        let keep: Vec<usize> = (0..beta.len()).filter(|&i| beta[i] != 0.0).collect();
        FittedScorer {
            kernel,
            support: features.select(Axis(0), &keep),
            coef: keep.iter().map(|&i| beta[i]).collect(),
            intercepts,
        }
    }

    pub fn n_features(&self) -> usize {
        self.support.ncols()
    }

    pub fn n_classes(&self) -> u32 {
        self.intercepts.len() as u32 + 1
    }

    /// Shared score `h(x)`.
    pub fn shared_score(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.support
            .rows()
            .into_iter()
            .zip(&self.coef)
            .map(|(sv, c)| c * self.kernel.eval_unchecked(sv, x))
            .sum()
    }

    /// `f_k(x)` for 0-based threshold `k`.
    pub fn decision_value(&self, x: ArrayView1<'_, f64>, k: usize) -> f64 {
        self.shared_score(x) + self.intercepts[k]
    }

    /// All `f_k(x)`, one row per sample of `x`.
    pub fn decision_values(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.n_features() {
            return Err(HolError::DimensionMismatch {
                expected: self.n_features(),
                actual: x.ncols(),
            });
        }
        let h = if self.coef.is_empty() {
            vec![0.0; x.nrows()]
        } else {
            let cross = gram(x, self.support.view(), &self.kernel)?;
            cross.rows().into_iter().map(|r| r.iter().zip(&self.coef).map(|(k, c)| k * c).sum()).collect()
        };
        Ok(Array2::from_shape_fn((x.nrows(), self.intercepts.len()), |(i, k)| {
            h[i] + self.intercepts[k]
        }))
    }

    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<u32>> {
        let f = self.decision_values(x)?;
        Ok(f.rows().into_iter().map(|r| predict_label(&r.to_vec())).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::data::LabelInterval;
    use ndarray::array;

    #[test]
    fn pav_examples() {
        assert_eq!(pav_nondecreasing(&[0.5, 0.2]), vec![0.35, 0.35]);
        assert_eq!(pav_nondecreasing(&[1.0, 2.0, 3.0]), vec![1.0, 2.0, 3.0]);
        assert_eq!(pav_nondecreasing(&[3.0, 1.0, 2.0]), vec![2.0, 2.0, 2.0]);
        assert_eq!(pav_nondecreasing(&[1.0, 3.0, 2.0, 4.0]), vec![1.0, 2.5, 2.5, 4.0]);
    }

    fn problem(labels: &[LabelInterval], k: u32, kind: LossKind) -> DualProblem {
        let n = labels.len();
        DualProblem::new(Arc::new(Array2::eye(n)), labels, k, 1.0, kind).unwrap()
    }

    fn solution(alpha: Vec<f64>, scores: Vec<f64>) -> DualSolution {
        DualSolution {
            alpha,
            objective: 0.0,
            iterations: 0,
            converged: true,
            scores,
        }
    }

    #[test]
    fn single_free_support_vector() {
        let p = problem(&[LabelInterval::precise(1), LabelInterval::precise(2)], 2, LossKind::Mae);
        let b = recover_intercepts(&p, &solution(vec![0.5, 0.5], vec![0.3, -0.9])).unwrap();
        // free z=+1 at h=0.3 gives 0.7; free z=−1 at h=−0.9 gives −0.1
        assert!((b.values[0] - 0.3).abs() < 1e-12);
        let b = recover_intercepts(&p, &solution(vec![0.5, 1.0], vec![0.3, -0.9])).unwrap();
        assert!((b.values[0] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn bounds_without_free_variables() {
        let p = problem(&[LabelInterval::precise(1), LabelInterval::precise(2)], 2, LossKind::Mae);
        // both at zero: z=+1 gives b ≥ 1 − 2 = −1, z=−1 gives b ≤ −1 − (−2) = 1
        let b = recover_intercepts(&p, &solution(vec![0.0, 0.0], vec![2.0, -2.0])).unwrap();
        assert_eq!(b.values, vec![0.0]);
        // both at λ: z=+1 gives b ≤ 1 − 0.5, z=−1 gives b ≥ −1 − 0.1
        let b = recover_intercepts(&p, &solution(vec![1.0, 1.0], vec![0.5, 0.1])).unwrap();
        assert!((b.values[0] - (0.5 + -1.1) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_thresholds_are_interpolated() {
        // K = 5; only thresholds 1 and 4 have variables
        let labels = [LabelInterval::precise(1), LabelInterval::new(2, 4).unwrap(), LabelInterval::precise(5)];
        let p = problem(&labels, 5, LossKind::ZeroOne);
        assert!(p.block(1).is_empty() && p.block(2).is_empty());
        let alpha = vec![0.0; p.n_vars()];
        let b = recover_intercepts(&p, &solution(alpha, vec![0.0; 3])).unwrap();
        assert_eq!(b.empty, vec![1, 2]);
        let (b0, b3) = (b.raw[0], b.raw[3]);
        assert!((b.raw[1] - (b0 + (b3 - b0) / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn nothing_to_train() {
        let p = problem(&[LabelInterval::new(1, 3).unwrap()], 3, LossKind::Mae);
        let err = recover_intercepts(&p, &solution(vec![], vec![0.0])).unwrap_err();
        assert!(matches!(err, HolError::NoTrainableVariables));
    }

    #[test]
    fn shared_score_structure() {
        let s = FittedScorer {
            kernel: KernelSpec::Rbf { gamma: 1.0 },
            support: array![[0.0], [1.0]],
            coef: vec![0.5, -0.5],
            intercepts: vec![-0.2, 0.1, 0.4],
        };
        let x = array![[0.3], [2.0], [-1.0]];
        let f = s.decision_values(x.view()).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                assert!((f[[i, k]] - f[[i, 0]] - (s.intercepts[k] - s.intercepts[0])).abs() < 1e-12);
                assert!((f[[i, k]] - s.decision_value(x.row(i), k)).abs() < 1e-12);
            }
        }
        assert!(s.decision_values(array![[0.0, 1.0]].view()).is_err());
    }
}
