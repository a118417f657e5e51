//! Kernel functions and Gram matrices.

use std::fmt;

use ndarray::{Array2, ArrayView1, ArrayView2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HolError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    /// `a·b`
    Linear,
    /// `exp(−gamma ‖a − b‖²)`
    Rbf { gamma: f64 },
    /// `(a·b + coef0)^degree`
    Polynomial { degree: u32, coef0: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Rbf { gamma } if !(gamma > 0.0 && gamma.is_finite()) => {
                Err(HolError::param("gamma", format!("must be positive, got {gamma}")))
            }
            KernelSpec::Polynomial { degree: 0, .. } => Err(HolError::param("degree", "must be at least 1")),
            KernelSpec::Polynomial { coef0, .. } if !coef0.is_finite() => {
                Err(HolError::param("coef0", "must be finite"))
            }
            _ => Ok(()),
        }
    }

    /// Ordering used to prefer simpler kernels on ties.
    pub fn rank(&self) -> u8 {
        match self {
            KernelSpec::Linear => 0,
            KernelSpec::Rbf { .. } => 1,
            KernelSpec::Polynomial { .. } => 2,
        }
    }

    pub fn eval(&self, a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> Result<f64> {
        if a.len() != b.len() {
            return Err(HolError::DimensionMismatch {
                expected: a.len(),
                actual: b.len(),
            });
        }
        Ok(self.eval_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
        match *self {
            KernelSpec::Linear => a.dot(&b),
            KernelSpec::Rbf { gamma } => {
                let d2: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum();
                (-gamma * d2).exp()
            }
            KernelSpec::Polynomial { degree, coef0 } => (a.dot(&b) + coef0).powi(degree as i32),
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Linear => write!(f, "linear"),
            KernelSpec::Rbf { gamma } => write!(f, "rbf(gamma={gamma})"),
            KernelSpec::Polynomial { degree, coef0 } => write!(f, "polynomial(degree={degree}, coef0={coef0})"),
        }
    }
}

/// `K[i, j] = k(x_i, y_j)`.
pub fn gram(x: ArrayView2<'_, f64>, y: ArrayView2<'_, f64>, spec: &KernelSpec) -> Result<Array2<f64>> {
    spec.validate()?;
    if x.ncols() != y.ncols() {
        return Err(HolError::DimensionMismatch {
            expected: x.ncols(),
            actual: y.ncols(),
        });
    }
    let m = y.nrows();
    let rows: Vec<Vec<f64>> = (0..x.nrows())
        .into_par_iter()
        .map(|i| (0..m).map(|j| spec.eval_unchecked(x.row(i), y.row(j))).collect())
        .collect();
    Ok(Array2::from_shape_fn((x.nrows(), m), |(i, j)| rows[i][j]))
}

/// Gram matrix of `x` with itself; exactly symmetric because each
/// off-diagonal entry is evaluated once and mirrored.
pub fn gram_symmetric(x: ArrayView2<'_, f64>, spec: &KernelSpec) -> Result<Array2<f64>> {
    spec.validate()?;
    let n = x.nrows();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|j| spec.eval_unchecked(x.row(i), x.row(j))).collect())
        .collect();
    let mut out = Array2::zeros((n, n));
    for (i, row) in upper.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            out[[i, i + off]] = v;
            out[[i + off, i]] = v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_forms() {
        let a = array![1.0, 2.0];
        let b = array![3.0, 4.0];
        assert_eq!(KernelSpec::Linear.eval(a.view(), b.view()).unwrap(), 11.0);
        let rbf = KernelSpec::Rbf { gamma: 0.5 };
        assert_eq!(rbf.eval(a.view(), a.view()).unwrap(), 1.0);
        let v = rbf.eval(array![0.0, 0.0].view(), array![2.0, 0.0].view()).unwrap();
        assert!((v - (-2.0f64).exp()).abs() < 1e-15);
        assert!((v - 0.135335).abs() < 1e-6);
        let poly = KernelSpec::Polynomial { degree: 2, coef0: 1.0 };
        assert_eq!(poly.eval(a.view(), b.view()).unwrap(), 144.0);
        assert!(KernelSpec::Linear.eval(a.view(), array![1.0].view()).is_err());
    }

    #[test]
    fn validation() {
        assert!(KernelSpec::Rbf { gamma: 0.0 }.validate().is_err());
        assert!(KernelSpec::Polynomial { degree: 0, coef0: 0.0 }.validate().is_err());
        assert!(KernelSpec::Rbf { gamma: 1.0 }.validate().is_ok());
    }

    #[test]
    fn orthogonal_rows_give_diagonal_linear_gram() {
        let x = array![[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]];
        let g = gram_symmetric(x.view(), &KernelSpec::Linear).unwrap();
        assert_eq!(g, array![[1.0, 0.0, 0.0], [0.0, 4.0, 0.0], [0.0, 0.0, 9.0]]);
        let single = gram_symmetric(array![[0.3, 0.4]].view(), &KernelSpec::Rbf { gamma: 2.0 }).unwrap();
        assert_eq!(single, array![[1.0]]);
    }

    #[test]
    fn symmetric_and_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for spec in [
            KernelSpec::Linear,
            KernelSpec::Rbf { gamma: 0.7 },
            KernelSpec::Polynomial { degree: 3, coef0: 1.0 },
        ] {
            for n in [5, 20, 50] {
                let x = Array2::from_shape_fn((n, 3), |_| rng.random_range(-1.0..1.0));
                let g = gram_symmetric(x.view(), &spec).unwrap();
                assert_eq!(g, g.t());
                let m = DMatrix::from_fn(n, n, |i, j| g[[i, j]]);
                let min = m.symmetric_eigenvalues().min();
                assert!(min >= -1e-9, "{spec}: {min}");
                assert_eq!(g, gram(x.view(), x.view(), &spec).unwrap());
            }
        }
    }

    #[test]
    fn serde_shape() {
        let s = serde_json::to_string(&KernelSpec::Rbf { gamma: 0.25 }).unwrap();
        assert_eq!(s, r#"{"kind":"rbf","gamma":0.25}"#);
        let back: KernelSpec = serde_json::from_str(r#"{"kind":"linear"}"#).unwrap();
        assert_eq!(back, KernelSpec::Linear);
    }

    proptest::proptest! {
        #[test]
        fn rbf_in_unit_interval(a in proptest::collection::vec(-5.0f64..5.0, 3), b in proptest::collection::vec(-5.0f64..5.0, 3)) {
            let v = KernelSpec::Rbf { gamma: 0.1 }.eval(ArrayView1::from(&a), ArrayView1::from(&b)).unwrap();
            proptest::prop_assert!(v > 0.0 && v <= 1.0);
        }
    }
}
