use serde::{Deserialize, Serialize};

use super::LabelInterval;
use crate::error::{HolError, Result};

fn default_true() -> bool {
    true
}

/// A numeric range with explicit endpoint inclusion. Defaults to the
/// `(min, max]` convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericRange {
    pub min: f64,
    pub max: f64,
    #[serde(default)]
    pub min_inclusive: bool,
    #[serde(default = "default_true")]
    pub max_inclusive: bool,
}

impl NumericRange {
    pub fn new(min: f64, max: f64, min_inclusive: bool, max_inclusive: bool) -> Self {
        NumericRange {
            min,
            max,
            min_inclusive,
            max_inclusive,
        }
    }

    /// `(min, max]`
    pub fn upper_closed(min: f64, max: f64) -> Self {
        Self::new(min, max, false, true)
    }

    /// `[min, max]`
    pub fn closed(min: f64, max: f64) -> Self {
        Self::new(min, max, true, true)
    }

    pub fn contains(&self, v: f64) -> bool {
        let above = if self.min_inclusive { v >= self.min } else { v > self.min };
        let below = if self.max_inclusive { v <= self.max } else { v < self.max };
        above && below
    }

    fn overlaps(&self, other: &NumericRange) -> bool {
        let (first, second) = if self.min <= other.min { (self, other) } else { (other, self) };
        if second.min < first.max {
            return true;
        }
        second.min == first.max && second.min_inclusive && first.max_inclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassRange {
    pub class: u32,
    #[serde(flatten)]
    pub range: NumericRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbiguousRange {
    pub lo: u32,
    pub hi: u32,
    #[serde(flatten)]
    pub range: NumericRange,
}

/// Maps a numeric target onto precise classes, interval labels, or
/// exclusion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinningSpec {
    #[serde(default)]
    pub classes: Vec<ClassRange>,
    #[serde(default)]
    pub intervals: Vec<AmbiguousRange>,
}

impl BinningSpec {
    pub fn new(classes: Vec<ClassRange>, intervals: Vec<AmbiguousRange>) -> Result<Self> {
        let spec = BinningSpec { classes, intervals };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for pair in self.classes.windows(2) {
            if pair[1].class <= pair[0].class || pair[1].range.min < pair[0].range.max {
                return Err(HolError::Manifest(format!(
                    "class ranges must be listed in increasing class and value order (class {} then {})",
                    pair[0].class, pair[1].class
                )));
            }
        }
        for a in &self.intervals {
            if a.lo == 0 || a.lo >= a.hi {
                return Err(HolError::Manifest(format!(
                    "ambiguous range maps to [{}, {}]; need 1 <= lo < hi",
                    a.lo, a.hi
                )));
            }
        }
        let all: Vec<NumericRange> = self
            .classes
            .iter()
            .map(|c| c.range)
            .chain(self.intervals.iter().map(|a| a.range))
            .collect();
        for (i, a) in all.iter().enumerate() {
            if a.min > a.max {
                return Err(HolError::Manifest(format!("range min {} > max {}", a.min, a.max)));
            }
            for b in &all[i + 1..] {
                if a.overlaps(b) {
                    return Err(HolError::OverlappingRanges(format!(
                        "[{}, {}] and [{}, {}]",
                        a.min, a.max, b.min, b.max
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_classes(&self) -> u32 {
        self.classes
            .iter()
            .map(|c| c.class)
            .chain(self.intervals.iter().map(|a| a.hi))
            .max()
            .unwrap_or(0)
    }

    /// Label for one value; `None` means the value is excluded.
    pub fn label_for(&self, value: f64) -> Option<LabelInterval> {
        if let Some(c) = self.classes.iter().find(|c| c.range.contains(value)) {
            return Some(LabelInterval::precise(c.class));
        }
        self.intervals
            .iter()
            .find(|a| a.range.contains(value))
            .map(|a| LabelInterval::new(a.lo, a.hi).expect("validated"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinningOutcome {
    /// One entry per input value; `None` marks an excluded value.
    pub labels: Vec<Option<LabelInterval>>,
    pub precise: usize,
    pub interval: usize,
    pub excluded: usize,
}

pub fn bin_numeric_target(values: &[f64], spec: &BinningSpec) -> Result<BinningOutcome> {
    spec.validate()?;
    let labels: Vec<Option<LabelInterval>> = values.iter().map(|&v| spec.label_for(v)).collect();
    let precise = labels.iter().flatten().filter(|l| l.is_precise()).count();
    let interval = labels.iter().flatten().filter(|l| !l.is_precise()).count();
    Ok(BinningOutcome {
        excluded: labels.len() - precise - interval,
        labels,
        precise,
        interval,
    })
}
