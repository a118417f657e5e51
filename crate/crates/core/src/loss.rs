//! Interval losses and their reduction to K−1 coupled binary problems.
//!
//! A model is K−1 ranking functions `f_1 ≤ … ≤ f_{K−1}`; the predicted class
//! is one plus the number of strictly negative values. Against an interval
//! label `[lo, hi]`, threshold `k` sees the sample as positive (`z = +1`)
//! when `k ≥ hi`, negative (`z = −1`) when `k < lo`, and uninformative
//! otherwise. Weighting the per-threshold sign errors reproduces the
//! interval loss exactly.

use std::fmt;
use std::str::FromStr;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::data::LabelInterval;
use crate::error::{HolError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    /// Distance from the predicted class to the nearest class in the label.
    Mae,
    /// One unit for any prediction outside the label.
    ZeroOne,
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LossKind::Mae => "mae",
            LossKind::ZeroOne => "zero_one",
        })
    }
}

impl FromStr for LossKind {
    type Err = HolError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "mae" => Ok(LossKind::Mae),
            "zero_one" | "01" | "0/1" => Ok(LossKind::ZeroOne),
            _ => Err(HolError::param("loss", format!("unknown loss '{s}' (expected mae or zero_one)"))),
        }
    }
}

/// `1 + #{k : f_k < 0}`.
pub fn predict_label(f: &[f64]) -> u32 {
    1 + f.iter().filter(|&&v| v < 0.0).count() as u32
}

/// Per-threshold signs for thresholds `k = 1..K−1`.
pub fn encode_z(label: LabelInterval, k: u32) -> Vec<i8> {
    (1..k)
        .map(|t| {
            if t >= label.hi() {
                1
            } else if t < label.lo() {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Per-threshold weights for thresholds `k = 1..K−1`.
pub fn sample_weights(label: LabelInterval, k: u32, kind: LossKind) -> Vec<f64> {
    (1..k)
        .map(|t| {
            let on = match kind {
                LossKind::Mae => t < label.lo() || t >= label.hi(),
                LossKind::ZeroOne => t + 1 == label.lo() || t == label.hi(),
            };
            if on {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

pub fn interval_loss(predicted: u32, label: LabelInterval, kind: LossKind) -> f64 {
    let dist = if predicted < label.lo() {
        label.lo() - predicted
    } else if predicted > label.hi() {
        predicted - label.hi()
    } else {
        0
    };
    match kind {
        LossKind::Mae => dist as f64,
        LossKind::ZeroOne => f64::from(u8::from(dist > 0)),
    }
}

/// Loss built from arbitrary nonnegative threshold weights: the weights of
/// the thresholds crossed between the prediction and the label.
pub fn general_form_loss(predicted: u32, label: LabelInterval, weights: &[f64]) -> f64 {
    let w = |t: u32| weights[(t - 1) as usize];
    if predicted < label.lo() {
        (predicted..label.lo()).map(w).sum()
    } else if predicted > label.hi() {
        (label.hi()..predicted).map(w).sum()
    } else {
        0.0
    }
}

/// `Σ_i Σ_k w_{k,i} · [sign error of f_k(x_i) against z_{k,i}]` over rows
/// of `f`.
///
/// The sign of `f_k` is read the way the prediction rule reads it: `0`
/// counts as non-negative. So `z = +1` errs when `f_k < 0` and `z = −1` errs
/// when `f_k ≥ 0`. (The bare product test `z f_k < 0` would miss the
/// `z = −1, f_k = 0` case and break the identity with the direct loss.)
pub fn binary_reduction_loss(f: ArrayView2<'_, f64>, encodings: &[Vec<i8>], weights: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for (i, row) in f.rows().into_iter().enumerate() {
        for (t, &fk) in row.iter().enumerate() {
            let z = encodings[i][t];
            if (z > 0 && fk < 0.0) || (z < 0 && fk >= 0.0) {
                total += weights[i][t];
            }
        }
    }
    total
}

/// Both sides of the loss reduction identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionCheck {
    pub equal: bool,
    /// `Σ_i L(J_i, label_i)`.
    pub direct: f64,
    /// The weighted binary sign-error count.
    pub reduction: f64,
}

/// Compare the direct interval loss of the predictions implied by `f` with
/// the binary reduction loss. Each row of `f` must be non-decreasing; a
/// violating row is reported as [`HolError::NonMonotone`] (1-based).
pub fn check_reduction_equivalence(
    f: ArrayView2<'_, f64>,
    labels: &[LabelInterval],
    k: u32,
    kind: LossKind,
) -> Result<ReductionCheck> {
    if f.nrows() != labels.len() {
        return Err(HolError::DimensionMismatch {
            expected: labels.len(),
            actual: f.nrows(),
        });
    }
    if f.ncols() != (k - 1) as usize {
        return Err(HolError::DimensionMismatch {
            expected: (k - 1) as usize,
            actual: f.ncols(),
        });
    }
    for (i, row) in f.rows().into_iter().enumerate() {
        if row.iter().zip(row.iter().skip(1)).any(|(a, b)| a > b) {
            return Err(HolError::NonMonotone { row: i + 1 });
        }
    }
    let direct: f64 = f
        .rows()
        .into_iter()
        .zip(labels)
        .map(|(row, &label)| interval_loss(predict_label(&row.to_vec()), label, kind))
        .sum();
    let encodings: Vec<Vec<i8>> = labels.iter().map(|&l| encode_z(l, k)).collect();
    let weights: Vec<Vec<f64>> = labels.iter().map(|&l| sample_weights(l, k, kind)).collect();
    let reduction = binary_reduction_loss(f, &encodings, &weights);
    Ok(ReductionCheck {
        equal: direct == reduction,
        direct,
        reduction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn iv(lo: u32, hi: u32) -> LabelInterval {
        LabelInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn prediction_rule() {
        assert_eq!(predict_label(&[0.0, 1.0, 2.0]), 1);
        assert_eq!(predict_label(&[-3.0, -2.0, -1.0]), 4);
        assert_eq!(predict_label(&[-0.5, 0.3]), 2);
    }

    #[test]
    fn encodings_and_weights() {
        assert_eq!(encode_z(iv(2, 4), 5), vec![-1, 0, 0, 1]);
        assert_eq!(encode_z(LabelInterval::precise(1), 3), vec![1, 1]);
        assert_eq!(encode_z(LabelInterval::precise(3), 3), vec![-1, -1]);
        assert_eq!(encode_z(iv(1, 4), 4), vec![0, 0, 0]);
        assert_eq!(sample_weights(iv(2, 4), 5, LossKind::Mae), vec![1.0, 0.0, 0.0, 1.0]);
        assert_eq!(sample_weights(LabelInterval::precise(3), 5, LossKind::Mae), vec![1.0; 4]);
        assert_eq!(
            sample_weights(LabelInterval::precise(3), 5, LossKind::ZeroOne),
            vec![0.0, 1.0, 1.0, 0.0]
        );
    }

    #[test]
    fn interval_losses() {
        let l = iv(2, 4);
        assert_eq!(interval_loss(5, l, LossKind::Mae), 1.0);
        assert_eq!(interval_loss(6, l, LossKind::Mae), 2.0);
        assert_eq!(interval_loss(6, l, LossKind::ZeroOne), 1.0);
        assert_eq!(interval_loss(3, l, LossKind::Mae), 0.0);
        assert_eq!(interval_loss(3, l, LossKind::ZeroOne), 0.0);
        assert_eq!(interval_loss(1, l, LossKind::Mae), 1.0);
    }

    fn all_labels(k: u32) -> Vec<LabelInterval> {
        (1..=k).flat_map(|lo| (lo..=k).map(move |hi| iv(lo, hi))).collect()
    }

    #[test]
    fn general_form_reproduces_both_losses() {
        for k in 2..=8 {
            for label in all_labels(k) {
                for kind in [LossKind::Mae, LossKind::ZeroOne] {
                    let w = sample_weights(label, k, kind);
                    for j in 1..=k {
                        assert_eq!(general_form_loss(j, label, &w), interval_loss(j, label, kind));
                        assert_eq!(general_form_loss(j, label, &vec![0.0; (k - 1) as usize]), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn losses_vanish_inside_and_grow_away() {
        for k in 2..=10 {
            for label in all_labels(k) {
                for kind in [LossKind::Mae, LossKind::ZeroOne] {
                    for j in 1..=k {
                        let here = interval_loss(j, label, kind);
                        if label.contains(j) {
                            assert_eq!(here, 0.0);
                        }
                        if j > label.hi() {
                            assert!(interval_loss(j - 1, label, kind) <= here);
                        }
                        if j < label.lo() {
                            assert!(interval_loss(j + 1, label, kind) <= here);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weights_imply_membership() {
        for k in 2..=10 {
            for label in all_labels(k) {
                let z = encode_z(label, k);
                for kind in [LossKind::Mae, LossKind::ZeroOne] {
                    let w = sample_weights(label, k, kind);
                    for t in 0..z.len() {
                        if w[t] > 0.0 {
                            assert_ne!(z[t], 0);
                        }
                    }
                }
                // reduced set for the 0/1 loss: threshold k touches hi or lo − 1
                let w = sample_weights(label, k, LossKind::ZeroOne);
                for t in 1..k {
                    let member = label.hi() == t || label.lo() == t + 1;
                    assert_eq!(w[(t - 1) as usize] != 0.0, member);
                }
            }
        }
    }

    #[test]
    fn worked_reduction_examples() {
        let f = array![[-0.5, 0.3]];
        let labels = [iv(2, 3)];
        let enc: Vec<_> = labels.iter().map(|&l| encode_z(l, 3)).collect();
        let w: Vec<_> = labels.iter().map(|&l| sample_weights(l, 3, LossKind::Mae)).collect();
        assert_eq!(binary_reduction_loss(f.view(), &enc, &w), 0.0);
        let c = check_reduction_equivalence(f.view(), &labels, 3, LossKind::Mae).unwrap();
        assert!(c.equal && c.direct == 0.0);

        let f = array![[-2.0, -1.0]];
        let labels = [LabelInterval::precise(1)];
        let c = check_reduction_equivalence(f.view(), &labels, 3, LossKind::Mae).unwrap();
        assert_eq!((c.direct, c.reduction), (2.0, 2.0));

        assert_eq!(binary_reduction_loss(Array2::zeros((0, 2)).view(), &[], &[]), 0.0);

        // a zero score sits on the non-negative side
        let f = array![[0.0]];
        let labels = [LabelInterval::precise(2)];
        let c = check_reduction_equivalence(f.view(), &labels, 2, LossKind::Mae).unwrap();
        assert_eq!((c.direct, c.reduction), (1.0, 1.0));
    }

    #[test]
    fn rejects_non_monotone_rows() {
        let f = array![[0.0, 1.0], [1.0, -1.0]];
        let labels = [LabelInterval::precise(1), LabelInterval::precise(2)];
        let err = check_reduction_equivalence(f.view(), &labels, 3, LossKind::Mae).unwrap_err();
        assert!(matches!(err, HolError::NonMonotone { row: 2 }));
    }

    #[test]
    fn randomized_equivalence_with_ties() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let k: u32 = rng.random_range(2..=6);
            let n = rng.random_range(1..=20);
            let mut f = Array2::zeros((n, (k - 1) as usize));
            let mut labels = Vec::new();
            for i in 0..n {
                // integers in [-2, 2] make exact zeros common
                let mut row: Vec<f64> = (1..k).map(|_| rng.random_range(-2..=2) as f64).collect();
                row.sort_by(f64::total_cmp);
                for (t, v) in row.into_iter().enumerate() {
                    f[[i, t]] = v;
                }
                let lo = rng.random_range(1..=k);
                labels.push(iv(lo, rng.random_range(lo..=k)));
            }
            for kind in [LossKind::Mae, LossKind::ZeroOne] {
                let c = check_reduction_equivalence(f.view(), &labels, k, kind).unwrap();
                assert!(c.equal, "{c:?}");
            }
        }
    }

    #[test]
    fn parse_loss_kind() {
        assert_eq!("MAE".parse::<LossKind>().unwrap(), LossKind::Mae);
        assert_eq!("zero-one".parse::<LossKind>().unwrap(), LossKind::ZeroOne);
        assert!("hinge".parse::<LossKind>().is_err());
    }
}
