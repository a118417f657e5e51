use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{HolError, Result};

/// Defaults read from `--config FILE`. Every key is optional; flags given on
/// the command line win. Unknown keys are an error.
///
/// ```toml
/// seed = 7
/// jobs = 2
/// loss = "zero_one"
/// lambda = 10.0
/// kernel = "rbf"
/// gamma = 0.25
/// folds = 5
/// runs = 30
/// methods = ["hol", "no-interval"]
/// formats = ["table", "csv"]
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub data_dir: Option<PathBuf>,
    pub loss: Option<String>,
    pub lambda: Option<f64>,
    pub kernel: Option<String>,
    pub gamma: Option<f64>,
    pub degree: Option<u32>,
    pub coef0: Option<f64>,
    pub tol: Option<f64>,
    pub max_passes: Option<usize>,
    pub screen: Option<bool>,
    pub no_standardize: Option<bool>,
    pub grid: Option<bool>,
    pub folds: Option<usize>,
    pub sigma: Option<f64>,
    pub runs: Option<usize>,
    pub methods: Option<Vec<String>>,
    pub freeze: Option<bool>,
    pub formats: Option<Vec<String>>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HolError::param("--config", e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HolError::io(path, e))?;
        Self::from_toml_str(&text)
    }
}
