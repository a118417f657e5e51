use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use super::OrdinalDataset;
use crate::error::{HolError, Result};
use crate::rng::{substream, Stream};

/// One train/validation split; both index lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

/// K-fold split that never separates rows sharing a group id. Rows without a
/// group id are their own group. Groups are shuffled with `seed` and dealt
/// round-robin, so fold sizes differ by at most one group.
pub fn group_kfold(dataset: &OrdinalDataset, folds: usize, seed: u64) -> Result<Vec<Fold>> {
    if folds < 2 {
        return Err(HolError::param("folds", format!("need at least 2, got {folds}")));
    }
    let mut by_id: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, g) in dataset.groups().iter().enumerate() {
        match g {
            Some(id) => by_id.entry(*id).or_default().push(i),
            None => groups.push(vec![i]),
        }
    }
    groups.extend(by_id.into_values());
    if groups.len() < folds {
        return Err(HolError::TooFewGroups {
            groups: groups.len(),
            folds,
        });
    }
    groups.sort_by_key(|g| g[0]);
    let mut rng = substream(seed, Stream::Fold, 0);
    groups.shuffle(&mut rng);

    let mut validation = vec![Vec::new(); folds];
    for (p, g) in groups.into_iter().enumerate() {
        validation[p % folds].extend(g);
    }
    let n = dataset.n_samples();
    Ok(validation
        .into_iter()
        .map(|mut val| {
            val.sort_unstable();
            let mut in_val = vec![false; n];
            for &i in &val {
                in_val[i] = true;
            }
            Fold {
                train: (0..n).filter(|&i| !in_val[i]).collect(),
                validation: val,
            }
        })
        .collect())
}
