//! Hybrid ordinal learning: kernel ordinal classifiers trained on datasets
//! that mix precisely-labeled samples with interval-labeled ones.
//!
//! An ordinal model with `K` classes is a set of `K - 1` ranking functions
//! `f_k(x) = h(x) + b_k` sharing one kernel expansion `h` and ordered
//! intercepts `b_1 <= ... <= b_{K-1}`. A sample is assigned to class
//! `1 + #{k : f_k(x) < 0}`.
//!
//! A training label is a closed class interval `[lo, hi]`; `lo == hi` is an
//! ordinary precise label. Interval losses (absolute distance to the
//! interval, or 0/1 membership) decompose exactly into a weighted sum of
//! sign errors of the `K - 1` coupled binary problems ([`loss`]). Replacing
//! the indicator with the hinge gives a convex quadratic program whose dual
//! is solved by SMO ([`solver`]).
//!
//! Module map:
//!
//! - [`data`]: datasets, CSV ingestion, target binning, interval simulation,
//!   feature screening, standardization, fold splitting, dataset manifests.
//! - [`kernel`]: kernel functions and Gram matrices.
//! - [`loss`]: prediction rule, interval losses and the binary reduction.
//! - [`solver`]: dual assembly, SMO, projected-gradient oracle, intercepts.
//! - [`model`]: the estimator, grid-search CV and the label baselines.
//! - [`eval`]: metrics, repeated-run benchmarks and report emission.
//! - [`cli`]: the `hol` command-line front end.

pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod kernel;
pub mod loss;
pub mod model;
pub mod rng;
pub mod solver;

pub use data::{LabelInterval, OrdinalDataset};
pub use error::{HolError, Result};
pub use kernel::KernelSpec;
pub use loss::LossKind;
pub use model::{HolConfig, HolModel};
