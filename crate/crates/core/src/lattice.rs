//! Enumeration of the subset lattice by size.

use crate::subset::VariableSubset;

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All `k`-subsets of `0..n` in ascending mask order (colexicographic on indices).
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k >= 1 && k <= n).then(|| (0..k).collect());
        Self { n, current }
    }
}

impl Iterator for Combinations {
    type Item = VariableSubset;

    fn next(&mut self) -> Option<Self::Item> {
        let c = self.current.as_mut()?;
        let out = VariableSubset::from_indices(c.iter().copied()).expect("k >= 1");
        let k = c.len();
        let mut i = 0;
        loop {
            let limit = if i + 1 < k { c[i + 1] } else { self.n };
            if c[i] + 1 < limit {
                c[i] += 1;
                for (j, slot) in c.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                break;
            }
            i += 1;
            if i == k {
                self.current = None;
                break;
            }
        }
        Some(out)
    }
}

/// Subsets of `0..n` with sizes in `min_size..=max_size`, ordered by size and
/// then by mask value.
pub fn subsets_by_size(n: usize, min_size: usize, max_size: usize) -> impl Iterator<Item = VariableSubset> {
    (min_size.max(1)..=max_size.min(n)).flat_map(move |k| Combinations::new(n, k))
}

/// Number of subsets yielded by [`subsets_by_size`].
pub fn count_by_size(n: usize, min_size: usize, max_size: usize) -> u64 {
    (min_size.max(1)..=max_size.min(n))
        .map(|k| binomial(n, k))
        .fold(0u64, u64::saturating_add)
}
