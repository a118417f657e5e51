use hybrid_ordinal::data::synthetic;
use hybrid_ordinal::model::{to_mid_interval, to_no_interval, Preprocessing};
use hybrid_ordinal::{HolConfig, HolModel, KernelSpec, LabelInterval, LossKind, OrdinalDataset};

fn config(loss: LossKind) -> HolConfig {
    HolConfig::new(loss, 1.0, KernelSpec::Rbf { gamma: 0.5 })
}

#[test]
fn ranking_functions_share_one_score() {
    let ds = synthetic::random_hybrid(40, 3, 5, 0.3, 4);
    for loss in [LossKind::Mae, LossKind::ZeroOne] {
        let model = HolModel::fit(&ds, &config(loss)).unwrap();
        let f = model.decision_values(ds.features()).unwrap();
        let b = model.intercepts();
        for row in f.rows() {
            let h = row[0] - b[0];
            for k in 1..row.len() {
                assert!((row[k] - b[k] - h).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn predictions_stay_in_range() {
    let ds = synthetic::random_hybrid(50, 4, 6, 0.5, 8);
    let model = HolModel::fit(&ds, &config(LossKind::Mae)).unwrap();
    let probe = synthetic::random_hybrid(30, 4, 6, 0.0, 99);
    let mut far = probe.features().to_owned();
    far *= 1e3;
    for x in [probe.features().to_owned(), far] {
        assert!(model.predict(x.view()).unwrap().iter().all(|&c| (1..=6).contains(&c)));
    }
}

#[test]
fn precise_only_data_makes_no_interval_baseline_identical() {
    let ds = synthetic::random_hybrid(40, 3, 4, 0.0, 2);
    assert_eq!(ds.interval_count(), 0);
    let reduced = to_no_interval(&ds).unwrap();
    let mid = to_mid_interval(&ds, 5).unwrap();
    assert_eq!(reduced, ds);
    assert_eq!(mid, ds);
    let a = HolModel::fit(&ds, &config(LossKind::Mae)).unwrap();
    let b = HolModel::fit(&reduced, &config(LossKind::Mae)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn fitting_is_byte_deterministic() {
    let ds = synthetic::random_hybrid(60, 5, 4, 0.4, 12);
    let pre = Preprocessing {
        standardize: true,
        screening: Some(Default::default()),
    };
    let bytes = |m: &HolModel| {
        let mut out = Vec::new();
        m.to_writer(&mut out).unwrap();
        out
    };
    let a = HolModel::fit_with(&ds, &config(LossKind::ZeroOne), &pre).unwrap();
    let b = HolModel::fit_with(&ds, &config(LossKind::ZeroOne), &pre).unwrap();
    assert_eq!(bytes(&a), bytes(&b));
    assert_eq!(HolModel::from_reader(bytes(&a).as_slice()).unwrap(), a);
}

#[test]
fn interval_labels_pull_predictions_into_their_range() {
    // one-dimensional line: precise anchors at the ends, the middle labeled
    // only as "somewhere in 2..=3"
    let xs: Vec<f64> = (0..30).map(|i| i as f64 / 3.0).collect();
    let labels: Vec<LabelInterval> = xs
        .iter()
        .map(|&x| match x {
            x if x < 3.0 => LabelInterval::precise(1),
            x if x > 7.0 => LabelInterval::precise(4),
            _ => LabelInterval::new(2, 3).unwrap(),
        })
        .collect();
    let ds = OrdinalDataset::new(ndarray::Array2::from_shape_vec((30, 1), xs).unwrap(), labels, 4).unwrap();
    let model = HolModel::fit(&ds, &HolConfig::new(LossKind::Mae, 10.0, KernelSpec::Linear)).unwrap();
    let pred = model.predict(ds.features()).unwrap();
    let inside = pred.iter().zip(ds.labels()).filter(|(p, l)| l.contains(**p)).count();
    assert!(inside >= 27, "{inside}/30 predictions inside their label");
}
