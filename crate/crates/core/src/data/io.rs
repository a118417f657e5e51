use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;

use super::{LabelInterval, OrdinalDataset};
use crate::error::{HolError, Result};

/// Which CSV columns hold the label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumns {
    /// One integer column; every row is precise.
    Single(String),
    /// Lower and upper class bound columns.
    Interval { lo: String, hi: String },
}

/// Column roles for [`load_csv`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvSchema {
    /// Feature columns in order. `None` takes every column not used as a
    /// label or group column.
    pub features: Option<Vec<String>>,
    pub label: LabelColumns,
    pub group: Option<String>,
    /// Class count. Inferred as the largest upper bound when absent.
    pub n_classes: Option<u32>,
}

impl CsvSchema {
    pub fn single(label: &str) -> Self {
        CsvSchema {
            features: None,
            label: LabelColumns::Single(label.to_string()),
            group: None,
            n_classes: None,
        }
    }

    pub fn interval(lo: &str, hi: &str) -> Self {
        CsvSchema {
            features: None,
            label: LabelColumns::Interval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            },
            group: None,
            n_classes: None,
        }
    }

    pub fn with_classes(mut self, n_classes: u32) -> Self {
        self.n_classes = Some(n_classes);
        self
    }

    pub fn with_group(mut self, column: &str) -> Self {
        self.group = Some(column.to_string());
        self
    }

    pub fn with_features(mut self, columns: Vec<String>) -> Self {
        self.features = Some(columns);
        self
    }

    fn reserved(&self) -> Vec<&str> {
        let mut out = match &self.label {
            LabelColumns::Single(c) => vec![c.as_str()],
            LabelColumns::Interval { lo, hi } => vec![lo.as_str(), hi.as_str()],
        };
        if let Some(g) = &self.group {
            out.push(g);
        }
        out
    }
}

/// A header plus string records, as read from a comma-separated file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| HolError::MalformedRow {
                row: i + 1,
                message: e.to_string(),
            })?;
            rows.push(record.iter().map(str::to_string).collect());
        }
        Ok(Table { headers, rows })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                HolError::MissingData(path.to_path_buf())
            } else {
                HolError::io(path, e)
            }
        })?;
        Self::from_reader(file)
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| HolError::param("column", format!("no column named '{name}'")))
    }

    /// Parse the named columns as a numeric matrix.
    pub fn numeric_matrix(&self, columns: &[String]) -> Result<Array2<f64>> {
        let idx = columns
            .iter()
            .map(|c| self.column_index(c))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Array2::zeros((self.rows.len(), idx.len()));
        for (r, row) in self.rows.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                out[[r, c]] = parse_f64(&row[j], r + 1, &self.headers[j])?;
            }
        }
        Ok(out)
    }
}

fn parse_f64(field: &str, row: usize, column: &str) -> Result<f64> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(HolError::MalformedRow {
            row,
            message: format!("non-numeric value '{field}' in column '{column}'"),
        }),
    }
}

fn parse_class(field: &str, row: usize, column: &str) -> Result<u32> {
    field.parse::<u32>().map_err(|_| HolError::MalformedRow {
        row,
        message: format!("label '{field}' in column '{column}' is not a positive integer"),
    })
}

/// Read a labeled dataset from CSV text. Row numbers in errors count data
/// records from 1 (the header is not counted).
pub fn read_csv<R: Read>(reader: R, schema: &CsvSchema) -> Result<OrdinalDataset> {
    let table = Table::from_reader(reader)?;
    dataset_from_table(&table, schema)
}

pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<OrdinalDataset> {
    let table = Table::from_path(path)?;
    dataset_from_table(&table, schema)
}

fn dataset_from_table(table: &Table, schema: &CsvSchema) -> Result<OrdinalDataset> {
    let reserved = schema.reserved();
    let feature_cols: Vec<String> = match &schema.features {
        Some(cols) => cols.clone(),
        None => table
            .headers
            .iter()
            .filter(|h| !reserved.contains(&h.as_str()))
            .cloned()
            .collect(),
    };
    let features = table.numeric_matrix(&feature_cols)?;

    let (lo_col, hi_col) = match &schema.label {
        LabelColumns::Single(c) => (table.column_index(c)?, table.column_index(c)?),
        LabelColumns::Interval { lo, hi } => (table.column_index(lo)?, table.column_index(hi)?),
    };
    let group_col = schema.group.as_deref().map(|g| table.column_index(g)).transpose()?;

    let mut bounds = Vec::with_capacity(table.rows.len());
    let mut groups = Vec::with_capacity(table.rows.len());
    for (r, row) in table.rows.iter().enumerate() {
        let lo = parse_class(&row[lo_col], r + 1, &table.headers[lo_col])?;
        let hi = parse_class(&row[hi_col], r + 1, &table.headers[hi_col])?;
        if lo > hi {
            return Err(HolError::LabelOrder { row: r + 1, lo, hi });
        }
        if lo == 0 {
            return Err(HolError::LabelRange {
                row: r + 1,
                lo,
                hi,
                n_classes: schema.n_classes.unwrap_or(hi),
            });
        }
        bounds.push((lo, hi));
        groups.push(match group_col {
            Some(g) if !row[g].is_empty() => Some(row[g].parse::<i64>().map_err(|_| {
                HolError::MalformedRow {
                    row: r + 1,
                    message: format!("group id '{}' is not an integer", row[g]),
                }
            })?),
            _ => None,
        });
    }
    if bounds.is_empty() {
        return Err(HolError::EmptyDataset("csv file has no data rows".into()));
    }

    let n_classes = schema
        .n_classes
        .unwrap_or_else(|| bounds.iter().map(|b| b.1).max().unwrap_or(1));
    let labels = bounds
        .iter()
        .enumerate()
        .map(|(r, &(lo, hi))| {
            if hi > n_classes {
                Err(HolError::LabelRange {
                    row: r + 1,
                    lo,
                    hi,
                    n_classes,
                })
            } else {
                LabelInterval::new(lo, hi)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    OrdinalDataset::new(features, labels, n_classes)?
        .with_groups(groups)?
        .with_feature_names(feature_cols)
}

/// Write features, optional group ids and `label_lo,label_hi` columns.
pub fn write_dataset_csv<W: Write>(dataset: &OrdinalDataset, writer: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    let names: Vec<String> = match dataset.feature_names() {
        Some(names) => names.to_vec(),
        None => (1..=dataset.n_features()).map(|j| format!("x{j}")).collect(),
    };
    let has_groups = dataset.groups().iter().any(Option::is_some);
    let mut header = names;
    if has_groups {
        header.push("group".into());
    }
    header.push("label_lo".into());
    header.push("label_hi".into());
    wtr.write_record(&header)?;
    for i in 0..dataset.n_samples() {
        let mut record: Vec<String> = dataset.row(i).iter().map(|v| v.to_string()).collect();
        if has_groups {
            record.push(dataset.groups()[i].map(|g| g.to_string()).unwrap_or_default());
        }
        let label = dataset.labels()[i];
        record.push(label.lo().to_string());
        record.push(label.hi().to_string());
        wtr.write_record(&record)?;
    }
    wtr.flush().map_err(|e| HolError::io("<csv output>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const HYBRID: &str = "a,b,lo,hi\n0.5,1,2,2\n1.5,2,1,3\n2.5,3,3,3\n";

    #[test]
    fn parses_hybrid_labels() {
        let ds = read_csv(HYBRID.as_bytes(), &CsvSchema::interval("lo", "hi").with_classes(3)).unwrap();
        assert_eq!(ds.n_samples(), 3);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.precise_count(), 2);
        assert_eq!(ds.interval_count(), 1);
        assert_eq!(ds.labels()[1], LabelInterval::new(1, 3).unwrap());
        assert_eq!(ds.feature_names().unwrap(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn single_label_schema_is_precise() {
        let text = "x,y\n1,1\n2,2\n3,2\n";
        let ds = read_csv(text.as_bytes(), &CsvSchema::single("y")).unwrap();
        assert_eq!(ds.n_classes(), 2);
        assert!(ds.labels().iter().all(LabelInterval::is_precise));
    }

    #[test]
    fn reports_reversed_interval_row() {
        let text = "x,lo,hi\n1,1,1\n2,3,1\n";
        let err = read_csv(text.as_bytes(), &CsvSchema::interval("lo", "hi")).unwrap_err();
        assert_eq!(err.to_string(), "lo > hi at row 2 (lo = 3, hi = 1)");
    }

    #[test]
    fn reports_label_outside_class_range() {
        let text = "x,y\n1,1\n2,4\n";
        let err = read_csv(text.as_bytes(), &CsvSchema::single("y").with_classes(3)).unwrap_err();
        assert!(matches!(err, HolError::LabelRange { row: 2, .. }));
        let text = "x,y\n1,0\n";
        assert!(read_csv(text.as_bytes(), &CsvSchema::single("y")).is_err());
    }

    #[test]
    fn reports_non_numeric_feature_and_ragged_rows() {
        let text = "x,y\n1,1\nabc,2\n";
        let err = read_csv(text.as_bytes(), &CsvSchema::single("y")).unwrap_err();
        assert!(matches!(err, HolError::MalformedRow { row: 2, .. }), "{err}");
        let text = "x,y\n1,1\n2\n";
        let err = read_csv(text.as_bytes(), &CsvSchema::single("y")).unwrap_err();
        assert!(matches!(err, HolError::MalformedRow { row: 2, .. }), "{err}");
    }

    #[test]
    fn groups_blank_cells_are_singletons() {
        let text = "x,y,pid\n1,1,7\n2,2,\n3,2,7\n";
        let ds = read_csv(text.as_bytes(), &CsvSchema::single("y").with_group("pid")).unwrap();
        assert_eq!(ds.groups(), &[Some(7), None, Some(7)]);
        assert_eq!(ds.n_features(), 1);
    }

    #[test]
    fn write_then_read_preserves_dataset() {
        let ds = read_csv(HYBRID.as_bytes(), &CsvSchema::interval("lo", "hi").with_classes(3)).unwrap();
        let mut buf = Vec::new();
        write_dataset_csv(&ds, &mut buf).unwrap();
        let back = read_csv(
            buf.as_slice(),
            &CsvSchema::interval("label_lo", "label_hi").with_classes(3),
        )
        .unwrap();
        assert_eq!(back, ds);
    }
}
