//! Seeded synthetic datasets used by tests, examples and the benchmark
//! harness.

use ndarray::{Array1, Array2};
use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::manifest::SplitData;
use super::{LabelInterval, OrdinalDataset};
use crate::rng::{substream, Stream};

/// One-dimensional, three-class, separable data: clusters centred at −2, 0
/// and +2 with half-width 0.5.
pub fn separable_clusters(n_per_class: usize, seed: u64) -> OrdinalDataset {
    let mut rng = substream(seed, Stream::Synthetic, 1);
    let mut x = Vec::with_capacity(3 * n_per_class);
    let mut labels = Vec::with_capacity(3 * n_per_class);
    for c in 1..=3u32 {
        let centre = 2.0 * (c as f64 - 2.0);
        for _ in 0..n_per_class {
            x.push(centre + rng.random_range(-0.5..0.5));
            labels.push(LabelInterval::precise(c));
        }
    }
    let n = x.len();
    OrdinalDataset::new(Array2::from_shape_vec((n, 1), x).expect("shape"), labels, 3).expect("valid fixture")
}

/// Two-dimensional, three-class rings: class `c` lies at radius in
/// `[1.5(c−1), 1.5(c−1) + 1)` with uniform angle. Ordinal in the radius, so
/// an rbf kernel separates it and a linear one cannot.
pub fn radial_rings(n_per_class: usize, seed: u64) -> OrdinalDataset {
    let mut rng = substream(seed, Stream::Synthetic, 2);
    let mut x = Array2::zeros((3 * n_per_class, 2));
    let mut labels = Vec::with_capacity(3 * n_per_class);
    for c in 1..=3u32 {
        for _ in 0..n_per_class {
            let r = 1.5 * (c - 1) as f64 + rng.random_range(0.0..1.0);
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let i = labels.len();
            x[[i, 0]] = r * theta.cos();
            x[[i, 1]] = r * theta.sin();
            labels.push(LabelInterval::precise(c));
        }
    }
    OrdinalDataset::new(x, labels, 3).expect("valid fixture")
}

/// Random hybrid-labeled data for property tests. A noisy linear score is
/// cut into `k` ordinal classes; each sample's label is widened into an
/// interval with probability `interval_fraction`. Every class keeps at least
/// one precise sample when `n ≥ k`.
pub fn random_hybrid(n: usize, d: usize, k: u32, interval_fraction: f64, seed: u64) -> OrdinalDataset {
    let mut rng = substream(seed, Stream::Synthetic, 3);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let w: Array1<f64> = (0..d).map(|_| normal.sample(&mut rng)).collect();
    let x = Array2::from_shape_fn((n, d), |_| normal.sample(&mut rng));
    let mut scores: Vec<(f64, usize)> = (0..n)
        .map(|i| (x.row(i).dot(&w) + 0.5 * normal.sample(&mut rng), i))
        .collect();
    scores.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut truth = vec![1u32; n];
    for (rank, &(_, i)) in scores.iter().enumerate() {
        truth[i] = 1 + (rank * k as usize / n.max(1)) as u32;
    }
    let mut seen_precise = vec![false; k as usize + 1];
    let labels = (0..n)
        .map(|i| {
            let y = truth[i];
            if !seen_precise[y as usize] || rng.random::<f64>() >= interval_fraction {
                seen_precise[y as usize] = true;
                return LabelInterval::precise(y);
            }
            let lo = rng.random_range(1..=y);
            let hi = rng.random_range(y..=k);
            LabelInterval::new(lo, hi).expect("lo <= y <= hi")
        })
        .collect();
    OrdinalDataset::new(x, labels, k).expect("valid fixture")
}

/// Shape of the disease-progression stand-in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProgressionParams {
    pub n_features: usize,
    /// Distance between adjacent class means along the signal direction, in
    /// units of the per-feature noise.
    pub separation: f64,
    /// Number of precise test samples, drawn uniformly over the classes.
    pub n_test: usize,
}

impl Default for ProgressionParams {
    fn default() -> Self {
        ProgressionParams {
            n_features: 10,
            separation: 1.0,
            n_test: 200,
        }
    }
}

/// Four-class progression-speed data with repeated visits per patient.
///
/// The training set has 349 visits from 249 patients: about 204 precise
/// visits, 55 labeled `[2, 4]` and 90 labeled `[3, 4]`. As in a cohort where
/// the outcome is censored by loss to follow-up, interval-labeled patients
/// skew toward slow progression: `[2, 4]` patients are truly in class 2, 3,
/// 4 with probabilities 0.15, 0.25, 0.6 and `[3, 4]` patients in 3, 4 with
/// 0.3, 0.7. Visits of one patient share a group id, a true class and a
/// patient-level feature offset. The test set is precise and independent.
pub fn progression_cohort(params: &ProgressionParams, seed: u64) -> SplitData {
    let mut rng = substream(seed, Stream::Synthetic, 4);
    let d = params.n_features;
    let normal = Normal::new(0.0, 1.0).expect("unit normal");

    // Signal: class position along a fixed direction, plus a curved term so
    // the class boundaries are not exactly linear.
    let dir: Vec<f64> = {
        let v: Vec<f64> = (0..d).map(|_| normal.sample(&mut rng)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.into_iter().map(|a| a / norm).collect()
    };
    let sep = params.separation;
    let draw = |rng: &mut rand_chacha::ChaCha8Rng, class: u32, offset: &[f64]| -> Vec<f64> {
        let t = sep * (class as f64 - 2.5);
        (0..d)
            .map(|j| {
                let curve = if j == 0 { 0.3 * t * t } else { 0.0 };
                dir[j] * t + curve + offset[j] + 0.6 * normal.sample(rng)
            })
            .collect()
    };

    // (label, visits, number of patients)
    let precise_weights = WeightedIndex::new([55.0, 49.0, 54.0, 46.0]).expect("weights");
    let wide = WeightedIndex::new([0.15, 0.25, 0.6]).expect("weights");
    let narrow = WeightedIndex::new([0.3, 0.7]).expect("weights");
    let cohorts: [(u8, usize, usize); 4] = [(0, 2, 55), (0, 1, 94), (1, 1, 55), (2, 2, 45)];

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut groups = Vec::new();
    let mut patient = 0i64;
    for &(kind, visits, patients) in &cohorts {
        for _ in 0..patients {
            let (truth, label) = match kind {
                0 => {
                    let c = 1 + precise_weights.sample(&mut rng) as u32;
                    (c, LabelInterval::precise(c))
                }
                1 => (2 + wide.sample(&mut rng) as u32, LabelInterval::new(2, 4).expect("valid")),
                _ => (3 + narrow.sample(&mut rng) as u32, LabelInterval::new(3, 4).expect("valid")),
            };
            let offset: Vec<f64> = (0..d).map(|_| 0.4 * normal.sample(&mut rng)).collect();
            for _ in 0..visits {
                rows.push(draw(&mut rng, truth, &offset));
                labels.push(label);
                groups.push(Some(patient));
            }
            patient += 1;
        }
    }
    let n = rows.len();
    let x = Array2::from_shape_fn((n, d), |(i, j)| rows[i][j]);
    let train = OrdinalDataset::new(x, labels, 4)
        .and_then(|ds| ds.with_groups(groups))
        .expect("valid fixture");

    let mut test_rows = Vec::with_capacity(params.n_test);
    let mut test_labels = Vec::with_capacity(params.n_test);
    for i in 0..params.n_test {
        let c = 1 + (i % 4) as u32;
        let offset: Vec<f64> = (0..d).map(|_| 0.4 * normal.sample(&mut rng)).collect();
        test_rows.push(draw(&mut rng, c, &offset));
        test_labels.push(LabelInterval::precise(c));
    }
    let xt = Array2::from_shape_fn((params.n_test, d), |(i, j)| test_rows[i][j]);
    let test = OrdinalDataset::new(xt, test_labels, 4).expect("valid fixture");
    SplitData { train, test }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cohort_shape() {
        let s = progression_cohort(&ProgressionParams::default(), 1);
        assert_eq!(s.train.n_samples(), 349);
        assert_eq!(s.train.interval_count(), 145);
        let wide = s.train.labels().iter().filter(|l| (l.lo(), l.hi()) == (2, 4)).count();
        assert_eq!(wide, 55);
        let patients: std::collections::BTreeSet<_> = s.train.groups().iter().collect();
        assert_eq!(patients.len(), 249);
        assert!(s.test.labels().iter().all(LabelInterval::is_precise));
        assert_eq!(s, progression_cohort(&ProgressionParams::default(), 1));
    }

    #[test]
    fn random_hybrid_keeps_a_precise_sample_per_class() {
        for seed in 0..20 {
            let ds = random_hybrid(12, 3, 4, 0.9, seed);
            for c in 1..=4 {
                assert!(ds.labels().iter().any(|l| l.is_precise() && l.lo() == c));
            }
        }
    }

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(separable_clusters(5, 2), separable_clusters(5, 2));
        assert_eq!(radial_rings(5, 2), radial_rings(5, 2));
        assert_ne!(radial_rings(5, 2), radial_rings(5, 3));
    }
}
