//! Dataset manifests: where a benchmark's raw file lives, how its columns
//! become features, how its target becomes ordinal labels, and how it is
//! split into training and test sets.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{BinAlignment, BinningSpec, LabelInterval, OrdinalDataset, SimulationParams, Table};
use crate::error::{HolError, Result};
use crate::rng::{substream, Stream};

const BUILTIN: &[(&str, &str)] = &[
    ("abalone", include_str!("../../manifests/abalone.toml")),
    ("auto-mpg", include_str!("../../manifests/auto-mpg.toml")),
    ("boston", include_str!("../../manifests/boston.toml")),
    ("eucalyptus", include_str!("../../manifests/eucalyptus.toml")),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSpec {
    /// Training rows. With `include_all_intervals`, the number of *precise*
    /// training rows.
    pub train: usize,
    /// Test rows; defaults to every remaining precise row.
    #[serde(default)]
    pub test: Option<usize>,
    /// Put every interval-labeled row into the training set.
    #[serde(default)]
    pub include_all_intervals: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSettings {
    #[serde(default = "unit_sigma")]
    pub sigma: f64,
    #[serde(default)]
    pub alignment: BinAlignment,
}

fn unit_sigma() -> f64 {
    1.0
}

impl Default for SimulationSettings {
    fn default() -> Self {
        SimulationSettings {
            sigma: 1.0,
            alignment: BinAlignment::Centered,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub name: String,
    /// Raw CSV path, relative to the data directory unless absolute.
    pub source: PathBuf,
    pub target: String,
    pub n_classes: u32,
    /// Columns to ignore.
    #[serde(default)]
    pub drop: Vec<String>,
    /// Columns to one-hot encode (levels in sorted order).
    #[serde(default)]
    pub categorical: Vec<String>,
    /// Optional group-id column.
    #[serde(default)]
    pub group: Option<String>,
    /// For a text target: level names in class order.
    #[serde(default)]
    pub label_levels: Option<Vec<String>>,
    /// For a numeric target: binning rules.
    #[serde(default)]
    pub binning: Option<BinningSpec>,
    pub split: SplitSpec,
    /// Replace training labels by simulated intervals.
    #[serde(default)]
    pub simulate: bool,
    #[serde(default)]
    pub simulation: SimulationSettings,
}

/// Counts reported by [`Manifest::prepare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrepareSummary {
    pub rows: usize,
    pub precise: usize,
    pub interval: usize,
    pub excluded: usize,
}

/// Training and test sets for one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitData {
    pub train: OrdinalDataset,
    pub test: OrdinalDataset,
}

impl Manifest {
    pub fn builtin_names() -> Vec<&'static str> {
        BUILTIN.iter().map(|(n, _)| *n).collect()
    }

    pub fn builtin(name: &str) -> Result<Manifest> {
        let text = BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| {
                HolError::Manifest(format!(
                    "unknown manifest '{name}'; available: {}",
                    Self::builtin_names().join(", ")
                ))
            })?;
        Self::from_toml_str(text)
    }

    pub fn from_toml_str(text: &str) -> Result<Manifest> {
        let m: Manifest = toml::from_str(text).map_err(|e| HolError::Manifest(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn from_path(path: &Path) -> Result<Manifest> {
        let text = std::fs::read_to_string(path).map_err(|e| HolError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// A built-in name, or else a path to a manifest file.
    pub fn resolve(name_or_path: &str) -> Result<Manifest> {
        if BUILTIN.iter().any(|(n, _)| *n == name_or_path) {
            return Self::builtin(name_or_path);
        }
        let path = Path::new(name_or_path);
        if path.is_file() {
            return Self::from_path(path);
        }
        Self::builtin(name_or_path)
    }

    fn validate(&self) -> Result<()> {
        if self.n_classes < 2 {
            return Err(HolError::Manifest("n_classes must be at least 2".into()));
        }
        match (&self.label_levels, &self.binning) {
            (Some(levels), None) if levels.len() == self.n_classes as usize => Ok(()),
            (Some(levels), None) => Err(HolError::Manifest(format!(
                "{} label levels for {} classes",
                levels.len(),
                self.n_classes
            ))),
            (None, Some(b)) => {
                b.validate()?;
                if b.n_classes() > self.n_classes {
                    return Err(HolError::Manifest("binning refers to a class above n_classes".into()));
                }
                Ok(())
            }
            _ => Err(HolError::Manifest(
                "exactly one of label_levels and binning must be given".into(),
            )),
        }
    }

    pub fn source_path(&self, data_dir: &Path) -> PathBuf {
        if self.source.is_absolute() {
            self.source.clone()
        } else {
            data_dir.join(&self.source)
        }
    }

    /// Read the raw file and build the full labeled dataset. Rows whose
    /// target falls outside every range are excluded.
    pub fn prepare(&self, data_dir: &Path) -> Result<(OrdinalDataset, PrepareSummary)> {
        let table = Table::from_path(&self.source_path(data_dir))?;
        self.prepare_table(&table)
    }

    pub fn prepare_table(&self, table: &Table) -> Result<(OrdinalDataset, PrepareSummary)> {
        let target = table.column_index(&self.target)?;
        let labels: Vec<Option<LabelInterval>> = table
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| self.label_for(&row[target], r + 1))
            .collect::<Result<_>>()?;
        let kept: Vec<usize> = (0..labels.len()).filter(|&r| labels[r].is_some()).collect();

        let mut skip: BTreeSet<&str> = self.drop.iter().map(String::as_str).collect();
        skip.insert(&self.target);
        if let Some(g) = &self.group {
            skip.insert(g);
        }
        let mut names = Vec::new();
        let mut columns: Vec<Vec<f64>> = Vec::new();
        for (j, header) in table.headers.iter().enumerate() {
            if skip.contains(header.as_str()) {
                continue;
            }
            if self.categorical.contains(header) {
                let levels: BTreeSet<&str> = kept.iter().map(|&r| table.rows[r][j].as_str()).collect();
                for level in levels {
                    names.push(format!("{header}={level}"));
                    columns.push(
                        kept.iter()
                            .map(|&r| f64::from(u8::from(table.rows[r][j] == level)))
                            .collect(),
                    );
                }
            } else {
                names.push(header.clone());
                columns.push(
                    kept.iter()
                        .map(|&r| {
                            let cell = &table.rows[r][j];
                            cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                                HolError::MalformedRow {
                                    row: r + 1,
                                    message: format!("non-numeric value '{cell}' in column '{header}'"),
                                }
                            })
                        })
                        .collect::<Result<_>>()?,
                );
            }
        }
        let features = Array2::from_shape_fn((kept.len(), columns.len()), |(i, j)| columns[j][i]);
        let labels: Vec<LabelInterval> = kept.iter().map(|&r| labels[r].expect("kept")).collect();
        let groups = match &self.group {
            Some(g) => {
                let gj = table.column_index(g)?;
                kept.iter()
                    .map(|&r| table.rows[r][gj].parse::<i64>().ok())
                    .collect()
            }
            None => vec![None; kept.len()],
        };
        let dataset = OrdinalDataset::new(features, labels, self.n_classes)?
            .with_groups(groups)?
            .with_feature_names(names)?;
        let summary = PrepareSummary {
            rows: table.rows.len(),
            precise: dataset.precise_count(),
            interval: dataset.interval_count(),
            excluded: table.rows.len() - kept.len(),
        };
        Ok((dataset, summary))
    }

    fn label_for(&self, cell: &str, row: usize) -> Result<Option<LabelInterval>> {
        if let Some(levels) = &self.label_levels {
            return match levels.iter().position(|l| l == cell) {
                Some(c) => Ok(Some(LabelInterval::precise(c as u32 + 1))),
                None if cell.is_empty() || cell == "?" => Ok(None),
                None => Err(HolError::MalformedRow {
                    row,
                    message: format!("unknown label level '{cell}'"),
                }),
            };
        }
        let value: f64 = cell.parse().map_err(|_| HolError::MalformedRow {
            row,
            message: format!("non-numeric target '{cell}'"),
        })?;
        Ok(self.binning.as_ref().expect("validated").label_for(value))
    }

    /// Seeded split into training and test sets, followed by interval
    /// simulation on the training set when the manifest asks for it. The
    /// test set holds precise labels only.
    pub fn split(&self, full: &OrdinalDataset, seed: u64) -> Result<SplitData> {
        let mut rng = substream(seed, Stream::Split, 0);
        let precise: Vec<usize> = (0..full.n_samples()).filter(|&i| full.labels()[i].is_precise()).collect();
        let (mut train, rest): (Vec<usize>, Vec<usize>) = if self.split.include_all_intervals {
            let mut pool = precise.clone();
            pool.shuffle(&mut rng);
            let take = self.check_size("train", self.split.train, pool.len())?;
            let mut train: Vec<usize> = pool[..take].to_vec();
            train.extend((0..full.n_samples()).filter(|&i| !full.labels()[i].is_precise()));
            (train, pool[take..].to_vec())
        } else {
            let mut pool: Vec<usize> = (0..full.n_samples()).collect();
            pool.shuffle(&mut rng);
            let take = self.check_size("train", self.split.train, pool.len())?;
            let rest = pool[take..]
                .iter()
                .copied()
                .filter(|&i| full.labels()[i].is_precise())
                .collect();
            (pool[..take].to_vec(), rest)
        };
        let n_test = self.check_size("test", self.split.test.unwrap_or(rest.len()), rest.len())?;
        let mut test = rest[..n_test].to_vec();
        train.sort_unstable();
        test.sort_unstable();

        let mut train = full.subset(&train);
        if self.simulate {
            let params = SimulationParams::new(seed)
                .with_sigma(self.simulation.sigma)
                .with_alignment(self.simulation.alignment);
            train = super::simulate_intervals(&train, &params)?;
        }
        Ok(SplitData {
            train,
            test: full.subset(&test),
        })
    }

    fn check_size(&self, what: &str, want: usize, have: usize) -> Result<usize> {
        if want > have {
            return Err(HolError::Manifest(format!(
                "{}: {what} split needs {want} rows but only {have} are available",
                self.name
            )));
        }
        Ok(want)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse() {
        for name in Manifest::builtin_names() {
            let m = Manifest::builtin(name).unwrap();
            assert_eq!(m.name, name);
        }
        let err = Manifest::builtin("iris").unwrap_err().to_string();
        assert!(err.contains("abalone") && err.contains("boston"), "{err}");
    }

    #[test]
    fn rejects_unknown_keys_and_double_labeling() {
        let base = Manifest::builtin("eucalyptus").unwrap();
        let text = toml::to_string(&base).unwrap();
        assert!(Manifest::from_toml_str(&format!("{text}\nbogus = 1\n")).is_err());
        let mut m = base.clone();
        m.label_levels = None;
        assert!(m.validate().is_err());
    }

    const TOY: &str = r#"
name = "toy"
source = "toy.csv"
target = "y"
n_classes = 3
categorical = ["c"]
drop = ["note"]
[split]
train = 3
include_all_intervals = true
[[binning.classes]]
class = 1
min = 0
max = 1
[[binning.classes]]
class = 3
min = 2
max = 3
[[binning.intervals]]
lo = 2
hi = 3
min = 1
max = 2
"#;

    fn toy_table() -> Table {
        let text = "x,c,note,y\n1,a,foo,0.5\n2,b,bar,1.5\n3,a,baz,2.5\n4,b,qux,0.2\n5,a,,9\n6,b,,2.8\n";
        Table::from_reader(text.as_bytes()).unwrap()
    }

    #[test]
    fn prepare_bins_one_hot_and_excludes() {
        let m = Manifest::from_toml_str(TOY).unwrap();
        let (ds, summary) = m.prepare_table(&toy_table()).unwrap();
        assert_eq!(
            summary,
            PrepareSummary {
                rows: 6,
                precise: 4,
                interval: 1,
                excluded: 1
            }
        );
        assert_eq!(ds.feature_names().unwrap(), &["x", "c=a", "c=b"]);
        assert_eq!(ds.row(1).to_vec(), vec![2.0, 0.0, 1.0]);
        assert_eq!(ds.labels()[1], LabelInterval::new(2, 3).unwrap());
    }

    #[test]
    fn split_keeps_intervals_in_training() {
        let m = Manifest::from_toml_str(TOY).unwrap();
        let (ds, _) = m.prepare_table(&toy_table()).unwrap();
        let s = m.split(&ds, 4).unwrap();
        assert_eq!(s.train.n_samples(), 4);
        assert_eq!(s.train.interval_count(), 1);
        assert_eq!(s.test.n_samples(), 1);
        assert_eq!(s, m.split(&ds, 4).unwrap());
        let mut big = m.clone();
        big.split.train = 10;
        assert!(big.split(&ds, 4).is_err());
    }
}
