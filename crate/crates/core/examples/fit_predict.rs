//! Fit a model on hybrid labels, save it, load it back and predict.

use hybrid_ordinal::data::synthetic;
use hybrid_ordinal::eval::compute_metrics;
use hybrid_ordinal::{HolConfig, HolModel, KernelSpec, LossKind};

fn main() -> hybrid_ordinal::Result<()> {
    let train = synthetic::random_hybrid(150, 4, 5, 0.4, 1);
    let test = synthetic::random_hybrid(300, 4, 5, 0.0, 1);
    let config = HolConfig::new(LossKind::Mae, 1.0, KernelSpec::Rbf { gamma: 0.25 });
    let model = HolModel::fit(&train, &config)?;
    println!("{config}: converged {} after {} updates", model.converged, model.iterations);
    println!("intercepts {:.3?}", model.intercepts());

    let path = std::env::temp_dir().join("hybrid-ordinal-example-model.json");
    model.save(&path)?;
    let loaded = HolModel::load(&path)?;
    assert_eq!(loaded, model);

    let truth: Vec<u32> = test.labels().iter().map(|l| l.lo()).collect();
    let predicted = loaded.predict(test.features())?;
    let m = compute_metrics(&predicted, &truth, test.n_classes())?;
    println!(
        "test: overall ACC {:.3}, class-averaged ACC {:.3}, MAD {:.3} (model file {})",
        m.overall_acc,
        m.avg_class_acc,
        m.mean_abs_deviation,
        path.display()
    );
    Ok(())
}
