//! Variable subsets as bitsets.
//!
//! A subset of at most 64 variables fits in one inline `u64` word. Wider
//! variable sets spill into additional words on the heap; the representation
//! stays canonical because trailing zero words are always trimmed, so equal
//! sets compare and hash equal regardless of how they were built.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

type Words = SmallVec<[u64; 1]>;

/// A non-empty set of variable indices.
///
/// Ordering is by numeric mask value (the set read as a binary number with
/// variable 0 as the least significant bit).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VariableSubset {
    words: Words,
}

impl VariableSubset {
    /// Builds a subset from indices. Duplicates are ignored; order is irrelevant.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut words = Words::new();
        for i in indices {
            let w = i / 64;
            if words.len() <= w {
                words.resize(w + 1, 0);
            }
            words[w] |= 1u64 << (i % 64);
        }
        Self::from_words(words).ok_or(Error::EmptySubset)
    }

    /// Builds a subset from indices, checking each against the variable count.
    pub fn checked<I: IntoIterator<Item = usize>>(indices: I, n: usize) -> Result<Self> {
        let indices: Vec<usize> = indices.into_iter().collect();
        if let Some(&index) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index, n });
        }
        Self::from_indices(indices)
    }

    pub fn singleton(index: usize) -> Self {
        Self::from_indices([index]).expect("singleton is non-empty")
    }

    /// The subset whose bits are set in `mask`; `None` for a zero mask.
    pub fn from_mask(mask: u64) -> Option<Self> {
        let mut words = Words::new();
        words.push(mask);
        Self::from_words(words)
    }

    fn from_words(mut words: Words) -> Option<Self> {
        while words.last() == Some(&0) {
            words.pop();
        }
        if words.is_empty() {
            None
        } else {
            Some(Self { words })
        }
    }

    /// The mask as a single word, when every member is below 64.
    pub fn as_mask(&self) -> Option<u64> {
        match self.words.as_slice() {
            [w] => Some(*w),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, index: usize) -> bool {
        self.words
            .get(index / 64)
            .is_some_and(|w| w & (1u64 << (index % 64)) != 0)
    }

    /// Largest member index.
    pub fn max_index(&self) -> usize {
        let top = self.words.len() - 1;
        top * 64 + 63 - self.words[top].leading_zeros() as usize
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn with(&self, index: usize) -> Self {
        let mut words = self.words.clone();
        let w = index / 64;
        if words.len() <= w {
            words.resize(w + 1, 0);
        }
        words[w] |= 1u64 << (index % 64);
        Self { words }
    }

    /// The subset minus `index`; `None` when that leaves nothing.
    pub fn without(&self, index: usize) -> Option<Self> {
        let mut words = self.words.clone();
        if let Some(w) = words.get_mut(index / 64) {
            *w &= !(1u64 << (index % 64));
        }
        Self::from_words(words)
    }

    pub fn union(&self, other: &Self) -> Self {
        let len = self.words.len().max(other.words.len());
        let words = (0..len)
            .map(|i| self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0))
            .collect();
        Self { words }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    /// Every non-empty subset of this one, including itself, ordered by
    /// local bit pattern. Supports up to 63 members.
    pub fn subsets(&self) -> impl Iterator<Item = VariableSubset> + '_ {
        let members = self.members();
        assert!(members.len() < 64, "subset too large to enumerate");
        let count = 1u64 << members.len();
        (1..count).map(move |local| {
            let mut words = Words::new();
            for (bit, &m) in members.iter().enumerate() {
                if local & (1 << bit) != 0 {
                    let w = m / 64;
                    if words.len() <= w {
                        words.resize(w + 1, 0);
                    }
                    words[w] |= 1u64 << (m % 64);
                }
            }
            VariableSubset { words }
        })
    }

    /// Canonical key text: decimal mask for single-word subsets, `0x` hex otherwise.
    pub fn key(&self) -> String {
        match self.as_mask() {
            Some(mask) => mask.to_string(),
            None => {
                let mut s = String::from("0x");
                for (i, w) in self.words.iter().rev().enumerate() {
                    if i == 0 {
                        s.push_str(&format!("{w:x}"));
                    } else {
                        s.push_str(&format!("{w:016x}"));
                    }
                }
                s
            }
        }
    }

    /// Inverse of [`VariableSubset::key`].
    pub fn parse_key(key: &str) -> Option<Self> {
        if let Some(hex) = key.strip_prefix("0x") {
            let mut words = Words::new();
            let mut end = hex.len();
            while end > 0 {
                let start = end.saturating_sub(16);
                words.push(u64::from_str_radix(&hex[start..end], 16).ok()?);
                end = start;
            }
            Self::from_words(words)
        } else {
            Self::from_mask(key.parse().ok()?)
        }
    }
}

impl Ord for VariableSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for VariableSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VariableSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VariableSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VariableSubset{self}")
    }
}

impl serde::Serialize for VariableSubset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> serde::Deserialize<'de> for VariableSubset {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(deserializer)?;
        VariableSubset::from_indices(members).map_err(serde::de::Error::custom)
    }
}
