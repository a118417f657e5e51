//! Bin a public dataset by its manifest and draw one seeded split.
//!
//! ```text
//! cargo run --example prepare_dataset -- abalone 0
//! ```

use std::path::Path;

use hybrid_ordinal::data::Manifest;

fn main() -> hybrid_ordinal::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "abalone".to_string());
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let data_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");

    let manifest = Manifest::builtin(&name)?;
    let (full, summary) = manifest.prepare(&data_dir)?;
    println!(
        "{name}: {} rows -> {} precise, {} interval, {} excluded; {} features, K = {}",
        summary.rows,
        summary.precise,
        summary.interval,
        summary.excluded,
        full.n_features(),
        full.n_classes()
    );

    let split = manifest.split(&full, seed)?;
    println!(
        "seed {seed}: train {} ({} precise / {} interval), test {}",
        split.train.n_samples(),
        split.train.precise_count(),
        split.train.interval_count(),
        split.test.n_samples()
    );
    let mut widths = std::collections::BTreeMap::new();
    for l in split.train.labels() {
        *widths.entry(l.to_string()).or_insert(0usize) += 1;
    }
    for (label, count) in widths {
        println!("  {label:>7}  {count}");
    }
    Ok(())
}
