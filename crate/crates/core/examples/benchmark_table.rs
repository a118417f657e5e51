//! Repeated-run comparison of HOL against the two label baselines on one
//! public dataset, printed in `mean (std)` form.
//!
//! ```text
//! cargo run --release --example benchmark_table -- abalone 3
//! ```

use std::path::Path;

use hybrid_ordinal::data::Manifest;
use hybrid_ordinal::eval::{run_benchmark, write_report, BenchmarkOptions, ManifestTask, ReportFormat};

fn main() -> hybrid_ordinal::Result<()> {
    env_logger::init();
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "boston".to_string());
    let runs = args.next().and_then(|r| r.parse().ok()).unwrap_or(2);
    let data_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");

    let task = ManifestTask::load(Manifest::builtin(&name)?, &data_dir)?;
    let options = BenchmarkOptions {
        runs,
        ..Default::default()
    };
    let start = std::time::Instant::now();
    let report = run_benchmark(&task, &options)?;
    write_report(&report, ReportFormat::Table, std::io::stdout())?;
    eprintln!("{runs} run(s) in {:.1?}", start.elapsed());
    Ok(())
}
