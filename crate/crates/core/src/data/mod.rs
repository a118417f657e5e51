//! Datasets with interval-censored ordinal labels and everything needed to
//! build them: CSV ingestion, target binning, interval simulation, feature
//! screening, standardization, and group-aware fold splitting.

mod binning;
mod folds;
mod io;
pub mod manifest;
mod screen;
mod simulate;
mod standardize;
pub mod synthetic;

use std::fmt;

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{HolError, Result};

pub use binning::{bin_numeric_target, AmbiguousRange, BinningOutcome, BinningSpec, ClassRange, NumericRange};
pub use folds::{group_kfold, Fold};
pub use io::{load_csv, read_csv, write_dataset_csv, CsvSchema, LabelColumns, Table};
pub use manifest::{Manifest, PrepareSummary, SplitData};
pub use screen::{screen_features, ScreeningParams};
pub use simulate::{interval_bound_pmf, simulate_intervals, BinAlignment, BoundSide, SimulationParams};
pub use standardize::{standardize, Standardizer};

/// A closed interval `[lo, hi]` of 1-based ordinal classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelInterval {
    lo: u32,
    hi: u32,
}

impl LabelInterval {
    pub fn new(lo: u32, hi: u32) -> Result<Self> {
        if lo == 0 {
            return Err(HolError::param("label", "classes are 1-based"));
        }
        if lo > hi {
            return Err(HolError::LabelOrder { row: 0, lo, hi });
        }
        Ok(LabelInterval { lo, hi })
    }

    /// # Panics
    /// Panics if `class == 0`.
    pub fn precise(class: u32) -> Self {
        assert!(class >= 1, "classes are 1-based");
        LabelInterval { lo: class, hi: class }
    }

    pub fn lo(&self) -> u32 {
        self.lo
    }

    pub fn hi(&self) -> u32 {
        self.hi
    }

    pub fn is_precise(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, class: u32) -> bool {
        self.lo <= class && class <= self.hi
    }

    /// Number of classes covered.
    pub fn len(&self) -> u32 {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for LabelInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_precise() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// Feature matrix plus one [`LabelInterval`] per row.
///
/// Rows may carry a group id (e.g. a patient with several visits); rows
/// without one are treated as singleton groups by [`group_kfold`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrdinalDataset {
    features: Array2<f64>,
    labels: Vec<LabelInterval>,
    n_classes: u32,
    groups: Vec<Option<i64>>,
    feature_names: Option<Vec<String>>,
}

impl OrdinalDataset {
    pub fn new(features: Array2<f64>, labels: Vec<LabelInterval>, n_classes: u32) -> Result<Self> {
        if n_classes < 2 {
            return Err(HolError::param("n_classes", format!("need K >= 2, got {n_classes}")));
        }
        if features.nrows() != labels.len() {
            return Err(HolError::DimensionMismatch {
                expected: features.nrows(),
                actual: labels.len(),
            });
        }
        for (row, label) in labels.iter().enumerate() {
            if label.hi > n_classes {
                return Err(HolError::LabelRange {
                    row: row + 1,
                    lo: label.lo,
                    hi: label.hi,
                    n_classes,
                });
            }
        }
        if let Some((row, _)) = features
            .axis_iter(Axis(0))
            .enumerate()
            .find(|(_, r)| r.iter().any(|v| !v.is_finite()))
        {
            return Err(HolError::MalformedRow {
                row: row + 1,
                message: "non-finite feature value".into(),
            });
        }
        let n = labels.len();
        Ok(OrdinalDataset {
            features,
            labels,
            n_classes,
            groups: vec![None; n],
            feature_names: None,
        })
    }

    pub fn with_groups(mut self, groups: Vec<Option<i64>>) -> Result<Self> {
        if groups.len() != self.labels.len() {
            return Err(HolError::DimensionMismatch {
                expected: self.labels.len(),
                actual: groups.len(),
            });
        }
        self.groups = groups;
        Ok(self)
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_features() {
            return Err(HolError::DimensionMismatch {
                expected: self.n_features(),
                actual: names.len(),
            });
        }
        self.feature_names = Some(names);
        Ok(self)
    }

    /// Same rows and metadata with new labels.
    pub fn with_labels(&self, labels: Vec<LabelInterval>) -> Result<Self> {
        let mut out = OrdinalDataset::new(self.features.clone(), labels, self.n_classes)?;
        out.groups = self.groups.clone();
        out.feature_names = self.feature_names.clone();
        Ok(out)
    }

    /// Same labels and metadata with a new feature matrix (same row count).
    pub fn with_features(&self, features: Array2<f64>, names: Option<Vec<String>>) -> Result<Self> {
        let mut out = OrdinalDataset::new(features, self.labels.clone(), self.n_classes)?;
        out.groups = self.groups.clone();
        if let Some(names) = names {
            out = out.with_feature_names(names)?;
        }
        Ok(out)
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn n_classes(&self) -> u32 {
        self.n_classes
    }

    pub fn features(&self) -> ArrayView2<'_, f64> {
        self.features.view()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.features.row(i)
    }

    pub fn labels(&self) -> &[LabelInterval] {
        &self.labels
    }

    pub fn groups(&self) -> &[Option<i64>] {
        &self.groups
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn precise_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_precise()).count()
    }

    pub fn interval_count(&self) -> usize {
        self.n_samples() - self.precise_count()
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> OrdinalDataset {
        OrdinalDataset {
            features: self.features.select(Axis(0), indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            n_classes: self.n_classes,
            groups: indices.iter().map(|&i| self.groups[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Columns at `columns`, in that order.
    pub fn select_features(&self, columns: &[usize]) -> OrdinalDataset {
        OrdinalDataset {
            features: self.features.select(Axis(1), columns),
            labels: self.labels.clone(),
            n_classes: self.n_classes,
            groups: self.groups.clone(),
            feature_names: self
                .feature_names
                .as_ref()
                .map(|names| columns.iter().map(|&c| names[c].clone()).collect()),
        }
    }
}
