use ndarray::{Array1, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use super::OrdinalDataset;
use crate::error::{HolError, Result};

/// Per-column mean and population standard deviation of a training matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: ArrayView2<'_, f64>) -> Result<Self> {
        if x.nrows() == 0 {
            return Err(HolError::EmptyDataset("cannot standardize an empty matrix".into()));
        }
        let means: Array1<f64> = x.mean_axis(Axis(0)).expect("non-empty");
        let stds = x.std_axis(Axis(0), 0.0);
        Ok(Standardizer {
            means: means.to_vec(),
            stds: stds.to_vec(),
        })
    }

    /// Identity transform for `d` columns.
    pub fn identity(d: usize) -> Self {
        Standardizer {
            means: vec![0.0; d],
            stds: vec![1.0; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    /// Zero-variance columns map to 0.
    pub fn transform(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.dim() {
            return Err(HolError::DimensionMismatch {
                expected: self.dim(),
                actual: x.ncols(),
            });
        }
        let mut out = x.to_owned();
        for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
            let (m, s) = (self.means[j], self.stds[j]);
            if s > 0.0 {
                col.mapv_inplace(|v| (v - m) / s);
            } else {
                col.fill(0.0);
            }
        }
        Ok(out)
    }

    pub fn transform_dataset(&self, ds: &OrdinalDataset) -> Result<OrdinalDataset> {
        ds.with_features(self.transform(ds.features())?, ds.feature_names().map(<[String]>::to_vec))
    }
}

/// Fit on `train` and apply the same statistics to every dataset in `others`.
pub fn standardize(
    train: &OrdinalDataset,
    others: &[&OrdinalDataset],
) -> Result<(OrdinalDataset, Vec<OrdinalDataset>, Standardizer)> {
    let st = Standardizer::fit(train.features())?;
    let train_out = st.transform_dataset(train)?;
    let rest = others
        .iter()
        .map(|d| st.transform_dataset(d))
        .collect::<Result<Vec<_>>>()?;
    Ok((train_out, rest, st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::LabelInterval;
    use ndarray::array;

    fn ds(x: Array2<f64>) -> OrdinalDataset {
        let n = x.nrows();
        OrdinalDataset::new(x, vec![LabelInterval::precise(1); n], 2).unwrap()
    }

    #[test]
    fn two_point_population_std() {
        let train = ds(array![[1.0, 5.0], [3.0, 5.0]]);
        let test = ds(array![[2.0, 7.0]]);
        let (tr, te, st) = standardize(&train, &[&test]).unwrap();
        assert_eq!(tr.features().column(0).to_vec(), vec![-1.0, 1.0]);
        assert_eq!(tr.features().column(1).to_vec(), vec![0.0, 0.0]);
        assert_eq!(te[0].features().row(0).to_vec(), vec![0.0, 0.0]);
        assert_eq!(st.stds, vec![1.0, 0.0]);
    }

    #[test]
    fn rejects_wrong_width_and_empty() {
        let st = Standardizer::fit(array![[1.0, 2.0]].view()).unwrap();
        assert!(st.transform(array![[1.0]].view()).is_err());
        assert!(Standardizer::fit(Array2::<f64>::zeros((0, 2)).view()).is_err());
    }
}
