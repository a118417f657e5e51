//! The two label baselines next to the full method on one split of the
//! synthetic progression cohort: drop interval labels, or collapse each to
//! its middle class.

use hybrid_ordinal::data::synthetic::{progression_cohort, ProgressionParams};
use hybrid_ordinal::eval::{compute_metrics, Method};
use hybrid_ordinal::{HolConfig, HolModel, KernelSpec, LossKind};

fn main() -> hybrid_ordinal::Result<()> {
    let split = progression_cohort(&ProgressionParams::default(), 0);
    let truth: Vec<u32> = split.test.labels().iter().map(|l| l.lo()).collect();
    let d = split.train.n_features() as f64;
    let config = HolConfig::new(LossKind::Mae, 1.0, KernelSpec::Rbf { gamma: 1.0 / d });
    for method in Method::ALL {
        let train = method.training_set(&split.train, 0)?;
        let model = HolModel::fit(&train, &config)?;
        let m = compute_metrics(&model.predict(split.test.features())?, &truth, split.test.n_classes())?;
        println!(
            "{:<18} {:>3} training samples ({:>3} interval)  ACC {:.3}  MAD {:.3}",
            method.to_string(),
            train.n_samples(),
            train.interval_count(),
            m.overall_acc,
            m.mean_abs_deviation
        );
    }
    Ok(())
}
