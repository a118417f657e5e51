use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::benchmark::{mean_std, BenchmarkReport, ReportRow};
use crate::error::{HolError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    /// Fixed-width text, `mean (std)` cells.
    Table,
    /// One summary line per (dataset, method).
    Csv,
    /// Full report including per-run values.
    Json,
    /// Long-format bar-chart values: one line per (dataset, method, metric).
    Plot,
}

impl ReportFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            ReportFormat::Table => "txt",
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Plot => "plot.csv",
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Table => "table",
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Plot => "plot",
        })
    }
}

impl FromStr for ReportFormat {
    type Err = HolError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "plot" => Ok(ReportFormat::Plot),
            _ => Err(HolError::param("format", format!("unknown report format '{s}' (table, csv, json, plot)"))),
        }
    }
}

/// Aggregate line of the CSV report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub method: String,
    pub runs: usize,
    pub overall_acc_mean: f64,
    pub overall_acc_std: f64,
    pub avg_class_acc_mean: f64,
    pub avg_class_acc_std: f64,
    pub mad_mean: f64,
    pub mad_std: f64,
    pub best_config_mode: String,
}

impl SummaryRow {
    pub fn of(row: &ReportRow) -> Self {
        let (oa, oa_s) = mean_std(&row.overall_acc);
        let (ca, ca_s) = mean_std(&row.avg_class_acc);
        let (md, md_s) = mean_std(&row.mean_abs_deviation);
        SummaryRow {
            dataset: row.dataset.clone(),
            method: row.method.to_string(),
            runs: row.runs(),
            overall_acc_mean: oa,
            overall_acc_std: oa_s,
            avg_class_acc_mean: ca,
            avg_class_acc_std: ca_s,
            mad_mean: md,
            mad_std: md_s,
            best_config_mode: row.best_config_mode(),
        }
    }
}

/// `0.80 (0.035)`.
pub fn format_cell(mean: f64, std: f64) -> String {
    format!("{mean:.2} ({std:.3})")
}

fn table<W: Write>(report: &BenchmarkReport, mut w: W) -> std::io::Result<()> {
    let rows: Vec<SummaryRow> = report.rows.iter().map(SummaryRow::of).collect();
    let name_w = rows.iter().map(|r| r.dataset.len()).max().unwrap_or(0).max("dataset".len());
    let method_w = rows.iter().map(|r| r.method.len()).max().unwrap_or(0).max("method".len());
    writeln!(
        w,
        "{:<name_w$}  {:<method_w$}  {:>4}  {:>13}  {:>13}  {:>13}",
        "dataset", "method", "runs", "overall ACC", "avg class ACC", "MAD (MSPE)"
    )?;
    for r in &rows {
        writeln!(
            w,
            "{:<name_w$}  {:<method_w$}  {:>4}  {:>13}  {:>13}  {:>13}",
            r.dataset,
            r.method,
            r.runs,
            format_cell(r.overall_acc_mean, r.overall_acc_std),
            format_cell(r.avg_class_acc_mean, r.avg_class_acc_std),
            format_cell(r.mad_mean, r.mad_std),
        )?;
    }
    let failures = report.failure_count();
    if failures > 0 {
        writeln!(w, "{failures} run(s) failed")?;
    }
    Ok(())
}

fn plot<W: Write>(report: &BenchmarkReport, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["dataset", "metric", "method", "mean", "std"])?;
    for (metric, pick) in [
        ("overall_acc", (|r: &ReportRow| r.overall_acc.clone()) as fn(&ReportRow) -> Vec<f64>),
        ("avg_class_acc", |r: &ReportRow| r.avg_class_acc.clone()),
        ("mad", |r: &ReportRow| r.mean_abs_deviation.clone()),
    ] {
        for row in &report.rows {
            let (m, s) = mean_std(&pick(row));
            out.write_record([row.dataset.clone(), metric.to_string(), row.method.to_string(), m.to_string(), s.to_string()])?;
        }
    }
    out.flush().map_err(|e| HolError::io("<report>", e))
}

/// Write `report` in the given format.
pub fn write_report<W: Write>(report: &BenchmarkReport, format: ReportFormat, mut w: W) -> Result<()> {
    let io = |e| HolError::io("<report>", e);
    match format {
        ReportFormat::Table => table(report, w).map_err(io),
        ReportFormat::Csv => {
            let mut out = csv::Writer::from_writer(w);
            for row in &report.rows {
                out.serialize(SummaryRow::of(row))?;
            }
            out.flush().map_err(io)
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut w, report).map_err(|e| HolError::ModelFormat(e.to_string()))?;
            w.write_all(b"\n").map_err(io)
        }
        ReportFormat::Plot => plot(report, w),
    }
}

/// Write `report` to `path`.
pub fn emit_report(report: &BenchmarkReport, format: ReportFormat, path: &Path) -> Result<()> {
    if report.rows.is_empty() {
        return Err(HolError::EmptyDataset("report has no rows".into()));
    }
    let file = std::fs::File::create(path).map_err(|e| HolError::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    write_report(report, format, &mut w)?;
    w.flush().map_err(|e| HolError::io(path, e))
}

pub fn read_report_json<R: Read>(r: R) -> Result<BenchmarkReport> {
    serde_json::from_reader(r).map_err(|e| HolError::ModelFormat(e.to_string()))
}

pub fn read_summary_csv<R: Read>(r: R) -> Result<Vec<SummaryRow>> {
    csv::Reader::from_reader(r).deserialize().map(|row| row.map_err(HolError::from)).collect()
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush().map_err(|e| HolError::io("<report>", e))
}
