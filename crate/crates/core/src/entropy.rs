//! Plug-in joint entropies over variable subsets, with a lattice cache.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::lattice;
use crate::subset::VariableSubset;

/// Logarithm base for all information quantities. Base 2 gives bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LogBase(f64);

impl LogBase {
    pub const BITS: LogBase = LogBase(2.0);
    pub const NATS: LogBase = LogBase(std::f64::consts::E);

    pub fn new(base: f64) -> Result<Self> {
        if base.is_finite() && base > 0.0 && base != 1.0 {
            Ok(LogBase(base))
        } else {
            Err(Error::out_of_range("log base", format!("{base} is not a valid base")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn log(self, x: f64) -> f64 {
        if self.0 == 2.0 {
            x.log2()
        } else if self.0 == std::f64::consts::E {
            x.ln()
        } else {
            x.ln() / self.0.ln()
        }
    }
}

impl Default for LogBase {
    fn default() -> Self {
        LogBase::BITS
    }
}

/// Turns a histogram of outcome counts into an entropy.
pub trait EntropyEstimator: Sync {
    /// `counts` are the non-zero cell counts sorted ascending; they sum to `total`.
    fn estimate(&self, counts: &[u64], total: u64, base: LogBase) -> f64;
}

/// Maximum-likelihood estimator: `-Σ p̂ log p̂` with `p̂ = count / total`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlugIn;

impl EntropyEstimator for PlugIn {
    fn estimate(&self, counts: &[u64], total: u64, base: LogBase) -> f64 {
        let n = total as f64;
        let h: f64 = counts
            .iter()
            .map(|&c| {
                let p = c as f64 / n;
                -p * base.log(p)
            })
            .sum();
        h.max(0.0)
    }
}

/// Sorted non-zero cell counts of the joint distribution of `subset`.
///
/// Rows are packed into a mixed-radix code when the product of cardinalities
/// fits in 64 bits, and hashed as tuples otherwise.
pub fn joint_counts(ds: &Dataset, subset: &VariableSubset) -> Result<Vec<u64>> {
    ds.check_subset(subset)?;
    let members = subset.members();
    let n = ds.n_samples();
    let radix: Option<u64> = members.iter().try_fold(1u64, |acc, &j| {
        acc.checked_mul(u64::from(ds.variables()[j].cardinality.max(1)))
    });

    let mut counts = Vec::new();
    if radix.is_some() {
        let mut codes = vec![0u64; n];
        for &j in &members {
            let card = u64::from(ds.variables()[j].cardinality.max(1));
            for (code, &v) in codes.iter_mut().zip(ds.column(j)) {
                *code = *code * card + u64::from(v);
            }
        }
        codes.sort_unstable();
        let mut i = 0;
        while i < codes.len() {
            let start = i;
            while i < codes.len() && codes[i] == codes[start] {
                i += 1;
            }
            counts.push((i - start) as u64);
        }
    } else {
        let cols: Vec<&[u32]> = members.iter().map(|&j| ds.column(j)).collect();
        let mut table: HashMap<Vec<u32>, u64> = HashMap::new();
        for row in 0..n {
            *table.entry(cols.iter().map(|c| c[row]).collect()).or_default() += 1;
        }
        counts.extend(table.into_values());
    }
    counts.sort_unstable();
    Ok(counts)
}

/// Plug-in joint entropy of `subset`.
pub fn joint_entropy(ds: &Dataset, subset: &VariableSubset, base: LogBase) -> Result<f64> {
    joint_entropy_with(ds, subset, base, &PlugIn)
}

pub fn joint_entropy_with(
    ds: &Dataset,
    subset: &VariableSubset,
    base: LogBase,
    estimator: &dyn EntropyEstimator,
) -> Result<f64> {
    if ds.n_samples() == 0 {
        return Err(Error::out_of_range("n_samples", "dataset has no samples"));
    }
    let counts = joint_counts(ds, subset)?;
    Ok(estimator.estimate(&counts, ds.n_samples() as u64, base))
}

/// Joint entropies keyed by subset, computed from one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyCache {
    table: HashMap<VariableSubset, f64>,
    log_base: LogBase,
    fingerprint: String,
    n_vars: usize,
    n_samples: usize,
}

impl EntropyCache {
    pub fn empty(ds: &Dataset, log_base: LogBase) -> Self {
        Self {
            table: HashMap::new(),
            log_base,
            fingerprint: ds.fingerprint(),
            n_vars: ds.n_vars(),
            n_samples: ds.n_samples(),
        }
    }

    /// Every subset of size `1..=max_size`, computed in parallel.
    pub fn populate(ds: &Dataset, max_size: usize, log_base: LogBase) -> Result<Self> {
        if max_size < 1 || max_size > ds.n_vars() {
            return Err(Error::out_of_range(
                "max_size",
                format!("{max_size} not in 1..={}", ds.n_vars()),
            ));
        }
        let mut cache = Self::empty(ds, log_base);
        let subsets: Vec<_> = lattice::subsets_by_size(ds.n_vars(), 1, max_size).collect();
        cache.insert_computed(ds, subsets, &PlugIn)?;
        Ok(cache)
    }

    /// Adds the given subsets and all of their non-empty sub-subsets.
    pub fn extend_closure<'a, I>(&mut self, ds: &Dataset, subsets: I) -> Result<()>
    where
        I: IntoIterator<Item = &'a VariableSubset>,
    {
        let mut wanted = HashSet::new();
        for s in subsets {
            ds.check_subset(s)?;
            for t in s.subsets() {
                if !self.table.contains_key(&t) {
                    wanted.insert(t);
                }
            }
        }
        let mut wanted: Vec<_> = wanted.into_iter().collect();
        wanted.sort_unstable();
        self.insert_computed(ds, wanted, &PlugIn)
    }

    fn insert_computed(
        &mut self,
        ds: &Dataset,
        subsets: Vec<VariableSubset>,
        estimator: &dyn EntropyEstimator,
    ) -> Result<()> {
        let base = self.log_base;
        let computed: Vec<(VariableSubset, f64)> = subsets
            .into_par_iter()
            .map(|s| joint_entropy_with(ds, &s, base, estimator).map(|h| (s, h)))
            .collect::<Result<_>>()?;
        self.table.extend(computed);
        Ok(())
    }

    pub fn get(&self, subset: &VariableSubset) -> Result<f64> {
        self.table
            .get(subset)
            .copied()
            .ok_or_else(|| Error::MissingEntry(subset.clone()))
    }

    pub fn singleton(&self, i: usize) -> Result<f64> {
        self.get(&VariableSubset::singleton(i))
    }

    pub fn contains(&self, subset: &VariableSubset) -> bool {
        self.table.contains_key(subset)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn log_base(&self) -> LogBase {
        self.log_base
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// Entries in ascending mask order.
    pub fn entries(&self) -> Vec<(&VariableSubset, f64)> {
        let mut out: Vec<_> = self.table.iter().map(|(k, &v)| (k, v)).collect();
        out.sort_unstable_by(|a, b| a.0.cmp(b.0));
        out
    }

    pub fn to_dump(&self) -> CacheDump {
        CacheDump {
            log_base: self.log_base,
            fingerprint: self.fingerprint.clone(),
            n_vars: self.n_vars,
            n_samples: self.n_samples,
            entropies: self
                .entries()
                .into_iter()
                .map(|(s, h)| CacheEntry {
                    mask: s.key(),
                    entropy: h,
                })
                .collect(),
        }
    }

    pub fn from_dump(dump: CacheDump) -> Result<Self> {
        let mut table = HashMap::with_capacity(dump.entropies.len());
        for e in dump.entropies {
            let s =
                VariableSubset::parse_key(&e.mask).ok_or_else(|| Error::out_of_range("cache mask", e.mask.clone()))?;
            table.insert(s, e.entropy);
        }
        Ok(Self {
            table,
            log_base: dump.log_base,
            fingerprint: dump.fingerprint,
            n_vars: dump.n_vars,
            n_samples: dump.n_samples,
        })
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        serde_json::to_writer(file, &self.to_dump())?;
        Ok(())
    }

    /// Loads a dump and checks that it was computed from `ds`.
    pub fn load_json(path: &Path, ds: &Dataset) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let cache = Self::from_dump(serde_json::from_reader(file)?)?;
        let expected = ds.fingerprint();
        if cache.fingerprint != expected {
            return Err(Error::FingerprintMismatch {
                expected,
                found: cache.fingerprint,
            });
        }
        Ok(cache)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheDump {
    pub log_base: LogBase,
    pub fingerprint: String,
    pub n_vars: usize,
    pub n_samples: usize,
    pub entropies: Vec<CacheEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub mask: String,
    pub entropy: f64,
}
