use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Jordan block counts of one real eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanProfile {
    pub eigenvalue: f64,
    /// Block size to number of blocks of that size; sizes with zero count
    /// are omitted.
    pub block_counts: BTreeMap<usize, usize>,
}

impl JordanProfile {
    /// Block counts from `r_k = rank((A - mu I)^k)`, `k = 0..=m`, via
    /// `count(s) = r_{s-1} - 2 r_s + r_{s+1}` (with `r_{m+1} = r_m`).
    pub fn from_rank_sequence(eigenvalue: f64, ranks: &[usize]) -> Result<Self> {
        let m = ranks.len() - 1;
        let r = |k: usize| ranks[k.min(m)] as i64;
        let mut block_counts = BTreeMap::new();
        for s in 1..=m {
            let count = r(s - 1) - 2 * r(s) + r(s + 1);
            if count < 0 {
                return Err(Error::InconsistentRankSequence { eigenvalue });
            }
            if count > 0 {
                block_counts.insert(s, count as usize);
            }
        }
        Ok(Self { eigenvalue, block_counts })
    }

    pub fn algebraic_multiplicity(&self) -> usize {
        self.block_counts.iter().map(|(s, c)| s * c).sum()
    }

    /// Number of Jordan blocks, `n - rank(A - mu I)`.
    pub fn geometric_multiplicity(&self) -> usize {
        self.block_counts.values().sum()
    }

    pub fn is_semisimple(&self) -> bool {
        self.block_counts.keys().all(|&s| s == 1)
    }

    /// First block size that occurs an odd number of times.
    pub fn first_odd_size(&self) -> Option<(usize, usize)> {
        self.block_counts.iter().find(|(_, &c)| c % 2 == 1).map(|(&s, &c)| (s, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_simple_blocks() {
        let p = JordanProfile::from_rank_sequence(-1.0, &[2, 0, 0]).unwrap();
        assert_eq!(p.block_counts, BTreeMap::from([(1, 2)]));
        assert_eq!(p.geometric_multiplicity(), 2);
    }

    #[test]
    fn one_block_of_size_two() {
        let p = JordanProfile::from_rank_sequence(-1.0, &[2, 1, 0]).unwrap();
        assert_eq!(p.block_counts, BTreeMap::from([(2, 1)]));
        assert_eq!(p.first_odd_size(), Some((2, 1)));
    }

    #[test]
    fn two_blocks_of_size_two() {
        let p = JordanProfile::from_rank_sequence(-1.0, &[4, 2, 0, 0, 0]).unwrap();
        assert_eq!(p.block_counts, BTreeMap::from([(2, 2)]));
        assert_eq!(p.algebraic_multiplicity(), 4);
        assert_eq!(p.first_odd_size(), None);
    }

    #[test]
    fn non_convex_sequence_rejected() {
        assert!(JordanProfile::from_rank_sequence(1.0, &[4, 3, 1, 0, 0]).is_err());
    }
}
