//! Recursive elimination of redundant features: a near-duplicate column and
//! an exact linear combination are dropped, independent columns kept.

use hybrid_ordinal::data::{screen_features, ScreeningParams};
use ndarray::Array2;
use rand::{Rng, SeedableRng};

fn main() -> hybrid_ordinal::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let n = 200;
    let mut x = Array2::zeros((n, 5));
    for i in 0..n {
        let (a, b, c) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        x[[i, 0]] = a;
        x[[i, 1]] = b;
        x[[i, 2]] = 0.5 * a + 0.5 * b; // exact combination
        x[[i, 3]] = c;
        x[[i, 4]] = c + 0.01 * rng.random_range(-1.0..1.0); // near copy
    }
    let params = ScreeningParams::default();
    let kept = screen_features(x.view(), &params)?;
    println!(
        "thresholds: partial corr > {}, RAE < {}; kept columns {kept:?} of 0..5",
        params.corr_threshold, params.rae_threshold
    );
    Ok(())
}
