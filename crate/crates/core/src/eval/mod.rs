//! Test-set metrics, repeated-run benchmarks and report files.

mod benchmark;
mod metrics;
mod report;

pub use benchmark::{
    assemble, mean_std, run_benchmark, BenchmarkOptions, BenchmarkReport, BenchmarkTask, FnTask, ManifestTask, Method,
    ReportRow, RunRecord,
};
pub use metrics::{compute_metrics, MetricSet};
pub use report::{
    emit_report, format_cell, read_report_json, read_summary_csv, write_report, write_summary_csv, ReportFormat,
    SummaryRow,
};
