use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Class, Dataset};
use crate::error::{Error, Result};
use crate::seed;

/// Fold membership of every row for each cross-validation repetition.
/// Folds are numbered `0..k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub assignments: Vec<Vec<usize>>,
    pub k: usize,
    pub repetitions: usize,
    pub seed: u64,
}

impl FoldPlan {
    /// Rows held out in `fold` of repetition `rep`, ascending.
    pub fn test_indices(&self, rep: usize, fold: usize) -> Vec<usize> {
        self.assignments[rep]
            .iter()
            .enumerate()
            .filter(|(_, &f)| f == fold)
            .map(|(i, _)| i)
            .collect()
    }

    /// Rows used for training in `fold` of repetition `rep`, ascending.
    pub fn train_indices(&self, rep: usize, fold: usize) -> Vec<usize> {
        self.assignments[rep]
            .iter()
            .enumerate()
            .filter(|(_, &f)| f != fold)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Stratified `k`-fold assignment repeated `repetitions` times.
///
/// Each class is shuffled independently and dealt round-robin; the majority
/// deal continues where the minority deal stopped so fold sizes stay within
/// one of each other as well.
pub fn stratified_folds(d: &Dataset, k: usize, repetitions: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::InvalidConfig(format!("fold count must be at least 2, got {k}")));
    }
    if repetitions < 1 {
        return Err(Error::InvalidConfig("repetition count must be at least 1".into()));
    }
    for class in [Class::Minority, Class::Majority] {
        let count = d.count(class);
        if count < k {
            return Err(Error::InsufficientClass {
                class: d.class_names().name(class).to_string(),
                count,
                needed: k,
            });
        }
    }

    let assignments = (0..repetitions)
        .map(|rep| {
            let mut rng = seed::stream(seed, &[0xF01D, rep as u64]);
            let mut fold_of = vec![0; d.n()];
            let mut dealt = 0;
            for class in [Class::Minority, Class::Majority] {
                let mut idx = d.indices_of(class);
                idx.shuffle(&mut rng);
                for i in idx {
                    fold_of[i] = dealt % k;
                    dealt += 1;
                }
            }
            fold_of
        })
        .collect();
    Ok(FoldPlan {
        assignments,
        k,
        repetitions,
        seed,
    })
}
