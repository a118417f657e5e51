//! The dual quadratic program shared by all K−1 threshold classifiers, its
//! solvers, and intercept recovery.
//!
//! Every (threshold `k`, sample `i`) pair with nonzero weight is one dual
//! variable `α ∈ [0, λ]` with sign `z ∈ {−1, +1}`. All thresholds share one
//! score function `h(x) = Σ α z k(x_i, x)`; each threshold adds its own
//! intercept, `f_k(x) = h(x) + b_k`.

mod oracle;
mod scorer;
mod smo;

use std::ops::Range;
use std::sync::Arc;

use ndarray::{Array2, ArrayView2};

use crate::data::OrdinalDataset;
use crate::error::{HolError, Result};
use crate::kernel::{gram_symmetric, KernelSpec};
use crate::loss::{encode_z, sample_weights, LossKind};

pub use oracle::{solve_dense_oracle, ORACLE_MAX_VARIABLES};
pub use scorer::{pav_nondecreasing, recover_intercepts, FittedScorer, Intercepts};
pub use smo::{solve_smo, SmoOptions};

/// One dual variable: threshold `k` (0-based) and sample `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualVar {
    pub k: usize,
    pub i: usize,
    pub z: f64,
}

#[derive(Debug, Clone)]
pub struct DualProblem {
    gram: Arc<Array2<f64>>,
    vars: Vec<DualVar>,
    /// Variable index range of each threshold.
    blocks: Vec<Range<usize>>,
    lambda: f64,
    kind: LossKind,
    n_classes: u32,
}

impl DualProblem {
    /// Variables are ordered by threshold, then by sample.
    pub fn new(
        gram: Arc<Array2<f64>>,
        labels: &[crate::data::LabelInterval],
        n_classes: u32,
        lambda: f64,
        kind: LossKind,
    ) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(HolError::param("lambda", format!("must be nonnegative and finite, got {lambda}")));
        }
        if gram.nrows() != labels.len() || gram.ncols() != labels.len() {
            return Err(HolError::DimensionMismatch {
                expected: labels.len(),
                actual: gram.nrows(),
            });
        }
        let z: Vec<Vec<i8>> = labels.iter().map(|&l| encode_z(l, n_classes)).collect();
        let w: Vec<Vec<f64>> = labels.iter().map(|&l| sample_weights(l, n_classes, kind)).collect();
        let mut vars = Vec::new();
        let mut blocks = Vec::with_capacity((n_classes - 1) as usize);
        for k in 0..(n_classes - 1) as usize {
            let start = vars.len();
            for i in 0..labels.len() {
                if w[i][k] > 0.0 {
                    debug_assert_ne!(z[i][k], 0);
                    vars.push(DualVar {
                        k,
                        i,
                        z: z[i][k] as f64,
                    });
                }
            }
            if vars.len() == start {
                log::debug!("threshold {} has no dual variables", k + 1);
            }
            blocks.push(start..vars.len());
        }
        Ok(DualProblem {
            gram,
            vars,
            blocks,
            lambda,
            kind,
            n_classes,
        })
    }

    pub fn gram(&self) -> ArrayView2<'_, f64> {
        self.gram.view()
    }

    pub fn vars(&self) -> &[DualVar] {
        &self.vars
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_samples(&self) -> usize {
        self.gram.nrows()
    }

    pub fn n_thresholds(&self) -> usize {
        self.blocks.len()
    }

    pub fn n_classes(&self) -> u32 {
        self.n_classes
    }

    pub fn block(&self, k: usize) -> Range<usize> {
        self.blocks[k].clone()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kind(&self) -> LossKind {
        self.kind
    }

    /// Per-sample aggregate `β_i = Σ_{(k,i)} α z`.
    pub fn sample_coefficients(&self, alpha: &[f64]) -> Vec<f64> {
        let mut beta = vec![0.0; self.n_samples()];
        for (v, &a) in self.vars.iter().zip(alpha) {
            beta[v.i] += a * v.z;
        }
        beta
    }

    /// Shared score `h(x_i) = (Gβ)_i` at every training sample.
    pub fn training_scores(&self, alpha: &[f64]) -> Vec<f64> {
        let beta = self.sample_coefficients(alpha);
        let g = &*self.gram;
        (0..self.n_samples())
            .map(|i| {
                g.row(i)
                    .iter()
                    .zip(&beta)
                    .filter(|(_, &b)| b != 0.0)
                    .map(|(k, b)| k * b)
                    .sum()
            })
            .collect()
    }

    /// `½ γᵀ Z C Z γ − Σ α`.
    pub fn objective(&self, alpha: &[f64]) -> f64 {
        let beta = self.sample_coefficients(alpha);
        let s = self.training_scores(alpha);
        0.5 * beta.iter().zip(&s).map(|(b, s)| b * s).sum::<f64>() - alpha.iter().sum::<f64>()
    }

    /// Largest violation of the box and per-threshold equality constraints.
    pub fn feasibility_violation(&self, alpha: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for &a in alpha {
            worst = worst.max(-a).max(a - self.lambda);
        }
        for block in &self.blocks {
            let eq: f64 = block.clone().map(|u| alpha[u] * self.vars[u].z).sum();
            worst = worst.max(eq.abs());
        }
        worst
    }

    /// Largest first-order optimality gap over thresholds:
    /// `max_{I_up} (z − h) − min_{I_low} (z − h)`, or 0 when every threshold
    /// is optimal.
    pub fn max_kkt_violation(&self, alpha: &[f64]) -> f64 {
        let s = self.training_scores(alpha);
        (0..self.n_thresholds())
            .map(|k| {
                let (up, low) = self.block_extremes(k, alpha, &s);
                (up - low).max(0.0)
            })
            .fold(0.0, f64::max)
    }

    /// `(max over I_up, min over I_low)` of `F = z − h(x_i)` in threshold `k`.
    pub(crate) fn block_extremes(&self, k: usize, alpha: &[f64], s: &[f64]) -> (f64, f64) {
        let mut up = f64::NEG_INFINITY;
        let mut low = f64::INFINITY;
        for u in self.block(k) {
            let v = self.vars[u];
            let f = v.z - s[v.i];
            let a = alpha[u];
            let (in_up, in_low) = membership(v.z, a, self.lambda);
            if in_up {
                up = up.max(f);
            }
            if in_low {
                low = low.min(f);
            }
        }
        (up, low)
    }
}

/// Whether a variable can move toward increasing / decreasing `α z`.
#[inline]
pub(crate) fn membership(z: f64, alpha: f64, lambda: f64) -> (bool, bool) {
    if z > 0.0 {
        (alpha < lambda, alpha > 0.0)
    } else {
        (alpha > 0.0, alpha < lambda)
    }
}

/// Gram matrix over the dataset's features followed by [`DualProblem::new`].
pub fn assemble_dual(dataset: &OrdinalDataset, kernel: &KernelSpec, lambda: f64, kind: LossKind) -> Result<DualProblem> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(HolError::param("lambda", format!("must be positive, got {lambda}")));
    }
    let gram = Arc::new(gram_symmetric(dataset.features(), kernel)?);
    DualProblem::new(gram, dataset.labels(), dataset.n_classes(), lambda, kind)
}

/// Output of a dual solver.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `h(x_i)` at the training samples for the returned `alpha`.
    pub scores: Vec<f64>,
}

/// Primal hinge objective at fitted parameters, scaled so the data term has
/// unit weight: `Σ w · max(0, 1 − z f_k(x_i)) + ‖η‖² / (2λ)`, where
/// `‖η‖² = βᵀ G β`.
pub fn primal_hinge_objective(problem: &DualProblem, alpha: &[f64], intercepts: &[f64]) -> f64 {
    let s = problem.training_scores(alpha);
    let beta = problem.sample_coefficients(alpha);
    let norm2: f64 = beta.iter().zip(&s).map(|(b, s)| b * s).sum();
    let hinge: f64 = problem
        .vars()
        .iter()
        .map(|v| (1.0 - v.z * (s[v.i] + intercepts[v.k])).max(0.0))
        .sum();
    hinge + norm2 / (2.0 * problem.lambda())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::LabelInterval;
    use ndarray::array;

    fn iv(lo: u32, hi: u32) -> LabelInterval {
        LabelInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn variable_sets() {
        let g = Arc::new(Array2::eye(3));
        let labels = [iv(2, 4), iv(1, 5), LabelInterval::precise(3)];
        let p = DualProblem::new(g.clone(), &labels, 5, 1.0, LossKind::Mae).unwrap();
        let of_sample = |p: &DualProblem, i: usize| -> Vec<usize> {
            p.vars().iter().filter(|v| v.i == i).map(|v| v.k + 1).collect()
        };
        assert_eq!(of_sample(&p, 0), vec![1, 4]);
        assert!(of_sample(&p, 1).is_empty());
        assert_eq!(of_sample(&p, 2), vec![1, 2, 3, 4]);
        let p = DualProblem::new(g, &labels, 5, 1.0, LossKind::ZeroOne).unwrap();
        assert_eq!(of_sample(&p, 2), vec![2, 3]);
    }

    #[test]
    fn binary_case_is_one_block() {
        let g = Arc::new(array![[1.0, 0.0], [0.0, 1.0]]);
        let p = DualProblem::new(g, &[LabelInterval::precise(1), LabelInterval::precise(2)], 2, 1.0, LossKind::Mae)
            .unwrap();
        assert_eq!(p.n_thresholds(), 1);
        assert_eq!(p.vars().iter().map(|v| v.z).collect::<Vec<_>>(), vec![1.0, -1.0]);
    }

    #[test]
    fn objective_matches_expanded_quadratic_form() {
        let x = array![[0.0, 1.0], [1.0, 0.5], [2.0, -1.0], [0.5, 0.5]];
        let labels = [LabelInterval::precise(1), iv(2, 3), LabelInterval::precise(3), LabelInterval::precise(2)];
        let ds = OrdinalDataset::new(x, labels.to_vec(), 3).unwrap();
        let p = assemble_dual(&ds, &KernelSpec::Rbf { gamma: 0.5 }, 2.0, LossKind::Mae).unwrap();
        let alpha: Vec<f64> = (0..p.n_vars()).map(|u| 0.1 * (u + 1) as f64).collect();
        let mut quad = 0.0;
        for (u, a) in p.vars().iter().enumerate() {
            for (v, b) in p.vars().iter().enumerate() {
                quad += alpha[u] * alpha[v] * a.z * b.z * p.gram()[[a.i, b.i]];
            }
        }
        let expect = 0.5 * quad - alpha.iter().sum::<f64>();
        assert!((p.objective(&alpha) - expect).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_lambda() {
        let ds = OrdinalDataset::new(array![[0.0], [1.0]], vec![LabelInterval::precise(1), LabelInterval::precise(2)], 2)
            .unwrap();
        assert!(assemble_dual(&ds, &KernelSpec::Linear, 0.0, LossKind::Mae).is_err());
        assert!(assemble_dual(&ds, &KernelSpec::Linear, -1.0, LossKind::Mae).is_err());
    }
}
