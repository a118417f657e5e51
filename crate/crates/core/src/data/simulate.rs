use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{LabelInterval, OrdinalDataset};
use crate::error::{HolError, Result};
use crate::rng::{substream, Stream};

/// Where each candidate bound's probability bin sits relative to the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinAlignment {
    /// Bin `[r − 0.5, r + 0.5]` around candidate class `r`; about 45% of
    /// simulated labels stay precise for σ = 1.
    #[default]
    Centered,
    /// Bin `[r + 0.5, r + 1.5]` (upper) / `[r − 1.5, r − 0.5]` (lower), one
    /// class further out; about 70% stay precise for σ = 1.
    Outward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// Parameters of the discretized-normal interval simulator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationParams {
    pub sigma: f64,
    pub seed: u64,
    #[serde(default)]
    pub alignment: BinAlignment,
}

impl SimulationParams {
    pub fn new(seed: u64) -> Self {
        SimulationParams {
            sigma: 1.0,
            seed,
            alignment: BinAlignment::Centered,
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_alignment(mut self, alignment: BinAlignment) -> Self {
        self.alignment = alignment;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(HolError::param("sigma", format!("must be positive, got {}", self.sigma)));
        }
        Ok(())
    }
}

/// Probability of each candidate bound for true class `y`.
///
/// The support is `y..=k` for [`BoundSide::Upper`] and `1..=y` for
/// [`BoundSide::Lower`], in increasing class order.
pub fn interval_bound_pmf(y: u32, k: u32, side: BoundSide, params: &SimulationParams) -> Result<Vec<f64>> {
    params.validate()?;
    if y == 0 || y > k {
        return Err(HolError::param("y", format!("class {y} outside 1..={k}")));
    }
    let normal = Normal::new(y as f64, params.sigma).expect("sigma validated");
    let (near, far) = match params.alignment {
        BinAlignment::Centered => (0.5, -0.5),
        BinAlignment::Outward => (1.5, 0.5),
    };
    let support: Vec<u32> = match side {
        BoundSide::Upper => (y..=k).collect(),
        BoundSide::Lower => (1..=y).collect(),
    };
    let raw: Vec<f64> = support
        .iter()
        .map(|&r| {
            let r = r as f64;
            match side {
                BoundSide::Upper => normal.cdf(r + near) - normal.cdf(r + far),
                BoundSide::Lower => normal.cdf(r - far) - normal.cdf(r - near),
            }
        })
        .collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|m| m / total).collect())
}

/// Replace every precise label `y` with `[lo, hi]`, drawing `lo` and `hi`
/// independently from their bound distributions. Each sample uses its own
/// random stream, so the output depends only on `params.seed`.
pub fn simulate_intervals(dataset: &OrdinalDataset, params: &SimulationParams) -> Result<OrdinalDataset> {
    params.validate()?;
    let k = dataset.n_classes();
    if let Some(row) = dataset.labels().iter().position(|l| !l.is_precise()) {
        return Err(HolError::param(
            "labels",
            format!("simulation needs precise labels; row {} is {}", row + 1, dataset.labels()[row]),
        ));
    }
    let mut tables = Vec::with_capacity(k as usize);
    for y in 1..=k {
        let lower = WeightedIndex::new(interval_bound_pmf(y, k, BoundSide::Lower, params)?)
            .expect("pmf has positive mass");
        let upper = WeightedIndex::new(interval_bound_pmf(y, k, BoundSide::Upper, params)?)
            .expect("pmf has positive mass");
        tables.push((lower, upper));
    }
    let labels = dataset
        .labels()
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let y = label.lo();
            let (lower, upper) = &tables[(y - 1) as usize];
            let mut rng = substream(params.seed, Stream::Simulate, i as u64);
            let lo = 1 + lower.sample(&mut rng) as u32;
            let hi = y + upper.sample(&mut rng) as u32;
            LabelInterval::new(lo, hi)
        })
        .collect::<Result<Vec<_>>>()?;
    dataset.with_labels(labels)
}
