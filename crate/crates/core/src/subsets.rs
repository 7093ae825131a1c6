//! Index-subset enumeration and the enumeration budget guard.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Lexicographic enumeration of the `k`-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations { n, cur: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let cur = self.cur.as_mut().unwrap();
        // rightmost position that can still be advanced
        match (0..k).rev().find(|&i| cur[i] < self.n - k + i) {
            Some(i) => {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
            }
            None => self.cur = None,
        }
        Some(out)
    }
}

/// `0..n` minus `set` (`set` sorted).
pub fn complement(set: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|i| set.binary_search(i).is_err()).collect()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

/// Desk-scale guard on exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    /// Largest total number of vectors across all frames in one search.
    pub max_vectors: usize,
    pub max_dim: usize,
    /// Largest number of candidate subsets a single search may test.
    pub max_candidates: u64,
    /// Disables every check.
    pub force: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_vectors: 24, max_dim: 8, max_candidates: 50_000_000, force: false }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { force: true, ..Budget::default() }
    }

    pub fn check_instance(&self, total_vectors: usize, dim: usize) -> Result<()> {
        if self.force {
            return Ok(());
        }
        if total_vectors > self.max_vectors {
            return Err(Error::BudgetExceeded("too many vectors (use force to override)"));
        }
        if dim > self.max_dim {
            return Err(Error::BudgetExceeded("dimension too large (use force to override)"));
        }
        Ok(())
    }

    pub(crate) fn meter(&self) -> Meter {
        Meter { limit: if self.force { u64::MAX } else { self.max_candidates }, used: 0 }
    }
}

/// Counts candidates tested against a [`Budget`].
#[derive(Debug)]
pub(crate) struct Meter {
    limit: u64,
    pub(crate) used: u64,
}

impl Meter {
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::BudgetExceeded("candidate limit reached"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(3, 3).collect::<Vec<_>>(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn counts_match_binomial() {
        for n in 0..9 {
            for k in 0..=n + 1 {
                assert_eq!(Combinations::new(n, k).count() as u64, binomial(n, k));
            }
        }
    }

    #[test]
    fn complement_of_subset() {
        assert_eq!(complement(&[1, 3], 5), vec![0, 2, 4]);
        assert_eq!(complement(&[], 2), vec![0, 1]);
    }

    #[test]
    fn budget_guard() {
        let b = Budget::default();
        assert!(b.check_instance(24, 8).is_ok());
        assert!(matches!(b.check_instance(25, 2), Err(Error::BudgetExceeded(_))));
        assert!(matches!(b.check_instance(4, 9), Err(Error::BudgetExceeded(_))));
        assert!(Budget::unlimited().check_instance(100, 100).is_ok());

        let mut m = Budget { max_candidates: 2, ..b }.meter();
        assert!(m.tick().is_ok() && m.tick().is_ok());
        assert!(m.tick().is_err());
    }
}
