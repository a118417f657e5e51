//! The interval losses and their decomposition into K−1 weighted binary
//! sign errors, worked through by hand for a few ranking-function values.

use hybrid_ordinal::loss::{check_reduction_equivalence, encode_z, interval_loss, predict_label, sample_weights};
use hybrid_ordinal::{LabelInterval, LossKind};
use ndarray::array;

fn main() -> hybrid_ordinal::Result<()> {
    let k = 5;
    let label = LabelInterval::new(2, 3)?;
    println!("label {label}, K = {k}: z = {:?}", encode_z(label, k));
    for kind in [LossKind::Mae, LossKind::ZeroOne] {
        println!("  {kind} weights {:?}", sample_weights(label, k, kind));
    }

    let rows = array![
        [-1.0, -0.5, 0.5, 1.0],  // J = 3, inside
        [-2.0, -1.0, -0.5, 0.0], // J = 4, one class above
        [0.0, 0.0, 1.0, 2.0],    // J = 1, one class below (0 counts as non-negative)
        [-3.0, -2.0, -1.0, -0.1] // J = 5, two classes above
    ];
    let labels = vec![label; rows.nrows()];
    for row in rows.rows() {
        let j = predict_label(row.as_slice().unwrap());
        println!(
            "f = {:>26}  J = {j}  MAE {}  0/1 {}",
            format!("{:?}", row.to_vec()),
            interval_loss(j, label, LossKind::Mae),
            interval_loss(j, label, LossKind::ZeroOne)
        );
    }
    for kind in [LossKind::Mae, LossKind::ZeroOne] {
        let check = check_reduction_equivalence(rows.view(), &labels, k, kind)?;
        println!("{kind}: direct {} = reduction {} ({})", check.direct, check.reduction, check.equal);
    }
    Ok(())
}
