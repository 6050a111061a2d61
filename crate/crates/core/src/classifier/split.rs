use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Train/test/validation shares per class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitFractions {
    pub signal: [f64; 3],
    pub noise: [f64; 3],
}

impl Default for SplitFractions {
    /// 49/30/30 of 109 signal tweets, noise in equal thirds.
    fn default() -> Self {
        SplitFractions {
            signal: [49.0 / 109.0, 30.0 / 109.0, 30.0 / 109.0],
            noise: [1.0 / 3.0; 3],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Train,
    Test,
    Validation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainSplit {
    pub seed: u64,
    pub train: Vec<u64>,
    pub test: Vec<u64>,
    pub validation: Vec<u64>,
}

impl TrainSplit {
    /// Seeded per-class split of `(tweet_id, is_signal)` pairs. Each output
    /// set is sorted by id.
    pub fn new(labeled: &[(u64, bool)], fractions: &SplitFractions, seed: u64) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (id, _) in labeled {
            if !seen.insert(*id) {
                return Err(Error::invalid(format!("tweet {id} appears twice in the training pool")));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut split = TrainSplit {
            seed,
            train: Vec::new(),
            test: Vec::new(),
            validation: Vec::new(),
        };
        for (class, f) in [(true, fractions.signal), (false, fractions.noise)] {
            let mut ids: Vec<u64> = labeled.iter().filter(|(_, s)| *s == class).map(|(id, _)| *id).collect();
            ids.sort_unstable();
            ids.shuffle(&mut rng);
            let n = ids.len();
            let total: f64 = f.iter().sum();
            let n_train = ((n as f64 * f[0] / total).round() as usize).min(n);
            let n_test = ((n as f64 * f[1] / total).round() as usize).min(n - n_train);
            split.train.extend_from_slice(&ids[..n_train]);
            split.test.extend_from_slice(&ids[n_train..n_train + n_test]);
            split.validation.extend_from_slice(&ids[n_train + n_test..]);
        }
        split.train.sort_unstable();
        split.test.sort_unstable();
        split.validation.sort_unstable();
        Ok(split)
    }

    pub fn role(&self, id: u64) -> Option<Role> {
        if self.train.binary_search(&id).is_ok() {
            Some(Role::Train)
        } else if self.test.binary_search(&id).is_ok() {
            Some(Role::Test)
        } else if self.validation.binary_search(&id).is_ok() {
            Some(Role::Validation)
        } else {
            None
        }
    }

    pub fn ids(&self, role: Role) -> &[u64] {
        match role {
            Role::Train => &self.train,
            Role::Test => &self.test,
            Role::Validation => &self.validation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pool(nsig: u64, nnoise: u64) -> Vec<(u64, bool)> {
        (0..nsig).map(|i| (i, true)).chain((0..nnoise).map(|i| (1000 + i, false))).collect()
    }

    #[test]
    fn default_proportions() {
        let split = TrainSplit::new(&pool(109, 1809), &SplitFractions::default(), 1).unwrap();
        let count = |ids: &[u64], signal: bool| ids.iter().filter(|&&i| (i < 1000) == signal).count();
        assert_eq!(count(&split.train, true), 49);
        assert_eq!(count(&split.test, true), 30);
        assert_eq!(count(&split.validation, true), 30);
        assert_eq!(count(&split.train, false), 603);
        assert_eq!(count(&split.test, false), 603);
        assert_eq!(count(&split.validation, false), 603);
    }

    #[test]
    fn duplicate_ids_rejected() {
        assert!(TrainSplit::new(&[(1, true), (1, false)], &SplitFractions::default(), 0).is_err());
    }

    proptest! {
        #[test]
        fn disjoint_complete_and_seeded(nsig in 0u64..80, nnoise in 0u64..200, seed in 0u64..1000) {
            let p = pool(nsig, nnoise);
            let a = TrainSplit::new(&p, &SplitFractions::default(), seed).unwrap();
            let b = TrainSplit::new(&p, &SplitFractions::default(), seed).unwrap();
            prop_assert_eq!(&a, &b);
            let mut all: Vec<u64> = a.train.iter().chain(&a.test).chain(&a.validation).copied().collect();
            all.sort_unstable();
            let mut want: Vec<u64> = p.iter().map(|(i, _)| *i).collect();
            want.sort_unstable();
            prop_assert_eq!(all, want);
        }
    }
}
