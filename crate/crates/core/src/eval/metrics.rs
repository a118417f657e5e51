use serde::{Deserialize, Serialize};

use crate::error::{HolError, Result};

/// Test-set accuracy measures against precise labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    /// Fraction of samples classified correctly.
    pub overall_acc: f64,
    /// Unweighted mean of the per-class accuracies over classes present in
    /// the truth.
    pub avg_class_acc: f64,
    /// Mean `|predicted − true|` in class steps (reported as "MSPE" in some
    /// ordinal-regression tables).
    #[serde(alias = "mspe")]
    pub mean_abs_deviation: f64,
}

/// Metrics for `predicted` against precise `truth` classes in `1..=k`.
///
/// Classes missing from `truth` are left out of `avg_class_acc` with a
/// warning.
pub fn compute_metrics(predicted: &[u32], truth: &[u32], k: u32) -> Result<MetricSet> {
    if truth.is_empty() {
        return Err(HolError::EmptyDataset("no samples to score".into()));
    }
    if predicted.len() != truth.len() {
        return Err(HolError::DimensionMismatch {
            expected: truth.len(),
            actual: predicted.len(),
        });
    }
    if let Some((row, &bad)) = truth.iter().chain(predicted).enumerate().find(|(_, &c)| c < 1 || c > k) {
        return Err(HolError::LabelRange {
            row: row % truth.len() + 1,
            lo: bad,
            hi: bad,
            n_classes: k,
        });
    }
    let mut hits = vec![0usize; k as usize];
    let mut counts = vec![0usize; k as usize];
    let mut correct = 0usize;
    let mut deviation = 0u64;
    for (&p, &t) in predicted.iter().zip(truth) {
        counts[(t - 1) as usize] += 1;
        if p == t {
            hits[(t - 1) as usize] += 1;
            correct += 1;
        }
        deviation += u64::from(p.abs_diff(t));
    }
    let present: Vec<usize> = (0..k as usize).filter(|&c| counts[c] > 0).collect();
    if present.len() < k as usize {
        let missing: Vec<usize> = (0..k as usize).filter(|&c| counts[c] == 0).map(|c| c + 1).collect();
        log::warn!("classes {missing:?} absent from the truth; left out of the class-averaged accuracy");
    }
    let m = truth.len() as f64;
    Ok(MetricSet {
        overall_acc: correct as f64 / m,
        avg_class_acc: present.iter().map(|&c| hits[c] as f64 / counts[c] as f64).sum::<f64>() / present.len() as f64,
        mean_abs_deviation: deviation as f64 / m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed() {
        let m = compute_metrics(&[1, 2, 2, 2], &[1, 1, 2, 2], 2).unwrap();
        assert_eq!(m.overall_acc, 0.75);
        assert_eq!(m.avg_class_acc, 0.75);
        assert_eq!(m.mean_abs_deviation, 0.25);
    }

    #[test]
    fn perfect_and_constant() {
        let t = [1, 2, 3, 4, 4, 3, 2, 1];
        let m = compute_metrics(&t, &t, 4).unwrap();
        assert_eq!((m.overall_acc, m.avg_class_acc, m.mean_abs_deviation), (1.0, 1.0, 0.0));
        let m = compute_metrics(&[2; 8], &t, 4).unwrap();
        assert_eq!((m.overall_acc, m.avg_class_acc), (0.25, 0.25));
    }

    #[test]
    fn absent_class_is_skipped() {
        let m = compute_metrics(&[1, 1, 3], &[1, 3, 3], 3).unwrap();
        assert_eq!(m.avg_class_acc, 0.75);
    }

    #[test]
    fn errors() {
        assert!(compute_metrics(&[], &[], 3).is_err());
        assert!(compute_metrics(&[1], &[1, 2], 3).is_err());
        assert!(compute_metrics(&[4], &[1], 3).is_err());
    }

    #[test]
    fn mspe_alias() {
        let m: MetricSet =
            serde_json::from_str(r#"{"overall_acc":0.5,"avg_class_acc":0.5,"mspe":0.75}"#).unwrap();
        assert_eq!(m.mean_abs_deviation, 0.75);
    }
}
