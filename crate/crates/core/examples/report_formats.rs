//! A small synthetic benchmark written in every report format.

use hybrid_ordinal::data::synthetic;
use hybrid_ordinal::eval::{run_benchmark, write_report, BenchmarkOptions, FnTask, ReportFormat};
use hybrid_ordinal::data::SplitData;
use hybrid_ordinal::{HolConfig, KernelSpec, LossKind};

fn main() -> hybrid_ordinal::Result<()> {
    let task = FnTask {
        name: "hybrid-toy".to_string(),
        make: |seed: u64| -> hybrid_ordinal::Result<SplitData> {
            let train = synthetic::random_hybrid(80, 3, 4, 0.5, seed);
            let test = synthetic::random_hybrid(200, 3, 4, 0.0, seed);
            Ok(SplitData { train, test })
        },
    };
    let options = BenchmarkOptions {
        runs: 3,
        frozen: Some(HolConfig::new(LossKind::Mae, 1.0, KernelSpec::Rbf { gamma: 1.0 / 3.0 })),
        ..Default::default()
    };
    let report = run_benchmark(&task, &options)?;
    for format in [ReportFormat::Table, ReportFormat::Csv, ReportFormat::Plot] {
        println!("--- {format} ---");
        write_report(&report, format, std::io::stdout())?;
    }
    Ok(())
}
