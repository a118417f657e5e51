//! Two ways of reducing a hybrid dataset to a precisely labeled one.

use rand::Rng;

use crate::data::{LabelInterval, OrdinalDataset};
use crate::error::{HolError, Result};
use crate::rng::{substream, Stream};

/// Keep only the precisely labeled samples.
pub fn to_no_interval(dataset: &OrdinalDataset) -> Result<OrdinalDataset> {
    let keep: Vec<usize> = (0..dataset.n_samples()).filter(|&i| dataset.labels()[i].is_precise()).collect();
    if keep.is_empty() {
        return Err(HolError::EmptyDataset("no precisely labeled samples to keep".into()));
    }
    Ok(dataset.subset(&keep))
}

/// Replace each interval label by its middle class. An interval with an even
/// number of classes has two middles; sample `i` picks one with a fair coin
/// from its own seeded stream.
pub fn to_mid_interval(dataset: &OrdinalDataset, seed: u64) -> Result<OrdinalDataset> {
    let labels = dataset
        .labels()
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let class = if l.len() % 2 == 1 {
                (l.lo() + l.hi()) / 2
            } else {
                let lower = l.lo() + l.len() / 2 - 1;
                if substream(seed, Stream::Tiebreak, i as u64).random_bool(0.5) {
                    lower + 1
                } else {
                    lower
                }
            };
            LabelInterval::precise(class)
        })
        .collect();
    dataset.with_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn iv(lo: u32, hi: u32) -> LabelInterval {
        LabelInterval::new(lo, hi).unwrap()
    }

    fn hybrid() -> OrdinalDataset {
        let labels = vec![iv(1, 1), iv(2, 4), iv(3, 3), iv(2, 3), iv(4, 4)];
        let x = Array2::from_shape_fn((5, 1), |(i, _)| i as f64);
        OrdinalDataset::new(x, labels, 4).unwrap()
    }

    #[test]
    fn no_interval_keeps_precise_rows() {
        let ds = to_no_interval(&hybrid()).unwrap();
        assert_eq!(ds.n_samples(), 3);
        assert_eq!(ds.features().column(0).to_vec(), vec![0.0, 2.0, 4.0]);
        assert_eq!(to_no_interval(&ds).unwrap(), ds);
        let all_interval = OrdinalDataset::new(Array2::zeros((2, 1)), vec![iv(1, 2); 2], 2).unwrap();
        assert!(to_no_interval(&all_interval).is_err());
    }

    #[test]
    fn mid_interval_odd_and_precise() {
        let ds = to_mid_interval(&hybrid(), 3).unwrap();
        let got: Vec<u32> = ds.labels().iter().map(|l| l.lo()).collect();
        assert!(ds.labels().iter().all(|l| l.is_precise()));
        assert_eq!(got[0], 1);
        assert_eq!(got[1], 3);
        assert_eq!(got[2], 3);
        assert!(got[3] == 2 || got[3] == 3);
        assert_eq!(got[4], 4);
        assert_eq!(to_mid_interval(&hybrid(), 3).unwrap(), ds);
    }

    #[test]
    fn even_width_middles_are_fair() {
        let n = 10_000;
        let x = Array2::zeros((n, 1));
        let ds = OrdinalDataset::new(x, vec![iv(2, 3); n], 4).unwrap();
        let mid = to_mid_interval(&ds, 42).unwrap();
        let threes = mid.labels().iter().filter(|l| l.lo() == 3).count();
        assert_eq!(mid.labels().iter().filter(|l| l.lo() == 2).count() + threes, n);
        let freq = threes as f64 / n as f64;
        assert!((freq - 0.5).abs() <= 0.02, "{freq}");
        // [1, 4] picks between 2 and 3 as well
        let wide = OrdinalDataset::new(Array2::zeros((200, 1)), vec![iv(1, 4); 200], 4).unwrap();
        let mid = to_mid_interval(&wide, 1).unwrap();
        assert!(mid.labels().iter().all(|l| l.lo() == 2 || l.lo() == 3));
    }
}
