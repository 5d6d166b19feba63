//! Weighted dependency hypergraphs inferred from data.
//!
//! The pipeline enumerates candidate subsets up to a size limit, computes
//! their joint entropies and symmetrized deltas, zeroes out every `|Δ̄|` that
//! does not exceed a per-size threshold, and keeps the survivors as edges.
//! Thresholds come either from a fixed value or from a permutation null in
//! which every column is shuffled independently.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::path::Path;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexity;
use crate::dataset::{Dataset, Variable};
use crate::entropy::{EntropyCache, LogBase};
use crate::error::{Error, Result};
use crate::lattice;
use crate::measures::{symmetric_delta, DeltaSign};
use crate::simulator::rng_for;
use crate::subset::VariableSubset;

pub const SCHEMA_VERSION: u32 = 1;

/// All subsets of `0..n` with sizes `2..=sigma`, by size then mask.
pub fn enumerate_subsets(n: usize, sigma: usize) -> Result<Vec<VariableSubset>> {
    check_sigma(n, sigma)?;
    Ok(lattice::subsets_by_size(n, 2, sigma).collect())
}

/// Like [`enumerate_subsets`], restricted to subsets containing `target`.
pub fn enumerate_containing(n: usize, sigma: usize, target: usize) -> Result<Vec<VariableSubset>> {
    check_sigma(n, sigma)?;
    if target >= n {
        return Err(Error::IndexOutOfRange { index: target, n });
    }
    Ok(lattice::subsets_by_size(n, 2, sigma)
        .filter(|s| s.contains(target))
        .collect())
}

fn check_sigma(n: usize, sigma: usize) -> Result<()> {
    if sigma < 2 || sigma > n {
        return Err(Error::out_of_range("sigma", format!("{sigma} not in 2..={n}")));
    }
    Ok(())
}

/// How permuted `|Δ̄|` values are summarized per subset size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullStatistic {
    /// One value per permutation: the largest `|Δ̄|` among subsets of that
    /// size. The quantile then bounds the chance of any false edge of that size.
    #[default]
    Max,
    /// Every subset's `|Δ̄|` from every permutation.
    Pooled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullConfig {
    pub n_perm: usize,
    pub quantile: f64,
    pub seed: u64,
    pub statistic: NullStatistic,
}

impl Default for NullConfig {
    fn default() -> Self {
        Self {
            n_perm: 1000,
            quantile: 0.99,
            seed: 0,
            statistic: NullStatistic::Max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullDistribution {
    pub config: NullConfig,
    /// Sorted ascending, keyed by subset size.
    pub samples: BTreeMap<usize, Vec<f64>>,
    pub thresholds: BTreeMap<usize, f64>,
}

impl NullDistribution {
    pub fn threshold(&self, size: usize) -> Option<f64> {
        self.thresholds.get(&size).copied()
    }
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Every column shuffled independently. Permutation `index` uses stream `index`.
pub fn permute_columns(ds: &Dataset, seed: u64, index: u64) -> Dataset {
    let mut rng = rng_for(seed, index);
    let mut out = ds.clone();
    for col in out.columns_mut() {
        col.shuffle(&mut rng);
    }
    out
}

/// Permutation null of `|Δ̄|` over all subsets of sizes `2..=sigma`.
pub fn build_null(ds: &Dataset, sigma: usize, config: &NullConfig) -> Result<NullDistribution> {
    let subsets = enumerate_subsets(ds.n_vars(), sigma)?;
    build_null_for(ds, &subsets, config, LogBase::BITS, DeltaSign::Product)
}

pub fn build_null_for(
    ds: &Dataset,
    subsets: &[VariableSubset],
    config: &NullConfig,
    log_base: LogBase,
    sign: DeltaSign,
) -> Result<NullDistribution> {
    if config.n_perm == 0 {
        return Err(Error::out_of_range("n_perm", "need at least one permutation"));
    }
    if !(config.quantile > 0.0 && config.quantile < 1.0) {
        return Err(Error::out_of_range(
            "quantile",
            format!("{} not in (0, 1)", config.quantile),
        ));
    }
    let per_perm: Vec<Vec<(usize, f64)>> = (0..config.n_perm)
        .into_par_iter()
        .map(|p| {
            let permuted = permute_columns(ds, config.seed, p as u64);
            let mut cache = EntropyCache::empty(&permuted, log_base);
            cache.extend_closure(&permuted, subsets)?;
            subsets
                .iter()
                .map(|s| Ok((s.len(), symmetric_delta(&cache, s, sign)?.abs())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut samples: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for values in &per_perm {
        match config.statistic {
            NullStatistic::Pooled => {
                for &(size, v) in values {
                    samples.entry(size).or_default().push(v);
                }
            }
            NullStatistic::Max => {
                let mut maxima: BTreeMap<usize, f64> = BTreeMap::new();
                for &(size, v) in values {
                    let m = maxima.entry(size).or_insert(0.0);
                    *m = m.max(v);
                }
                for (size, m) in maxima {
                    samples.entry(size).or_default().push(m);
                }
            }
        }
    }
    for v in samples.values_mut() {
        v.sort_by(f64::total_cmp);
    }
    let thresholds = samples
        .iter()
        .map(|(&size, v)| (size, quantile(v, config.quantile).max(0.0)))
        .collect();
    Ok(NullDistribution {
        config: config.clone(),
        samples,
        thresholds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Threshold {
    Absolute(f64),
    Null(NullDistribution),
}

impl Threshold {
    pub fn for_size(&self, size: usize) -> f64 {
        match self {
            Threshold::Absolute(t) => *t,
            Threshold::Null(null) => null.threshold(size).unwrap_or(f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeMeasure {
    #[default]
    SymmetricDelta,
    Phi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub members: VariableSubset,
    pub weight: f64,
    pub measure: EdgeMeasure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergraphMeta {
    pub sigma: usize,
    pub n_perm: Option<usize>,
    pub quantile: Option<f64>,
    pub seed: Option<u64>,
    pub null_statistic: Option<NullStatistic>,
    pub absolute_threshold: Option<f64>,
    /// Threshold on `|Δ̄|` per subset size.
    pub thresholds: BTreeMap<usize, f64>,
    pub target: Option<usize>,
    pub minimal: bool,
    pub log_base: LogBase,
    pub sign: DeltaSign,
    pub n_samples: usize,
    /// SHA-256 of the input codes.
    pub fingerprint: String,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub version: u32,
    pub vertices: Vec<Variable>,
    pub edges: Vec<Edge>,
    pub meta: HypergraphMeta,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InferConfig {
    pub sigma: usize,
    /// Restrict candidates to subsets containing this variable.
    pub target: Option<usize>,
    pub null: NullConfig,
    /// Replaces the permutation null when set.
    pub absolute_threshold: Option<f64>,
    pub measure: EdgeMeasure,
    /// Drop edges that contain another surviving edge.
    pub minimal: bool,
    pub log_base: LogBase,
    pub sign: DeltaSign,
}

impl Default for InferConfig {
    fn default() -> Self {
        Self {
            sigma: 3,
            target: None,
            null: NullConfig::default(),
            absolute_threshold: None,
            measure: EdgeMeasure::SymmetricDelta,
            minimal: false,
            log_base: LogBase::BITS,
            sign: DeltaSign::Product,
        }
    }
}

/// Runs the full pipeline on `ds`.
pub fn run_inference(ds: &Dataset, config: &InferConfig) -> Result<Hypergraph> {
    let subsets = match config.target {
        Some(t) => enumerate_containing(ds.n_vars(), config.sigma, t)?,
        None => enumerate_subsets(ds.n_vars(), config.sigma)?,
    };
    let mut cache = EntropyCache::empty(ds, config.log_base);
    cache.extend_closure(ds, &subsets)?;
    let threshold = match config.absolute_threshold {
        Some(t) if t >= 0.0 => Threshold::Absolute(t),
        Some(t) => return Err(Error::out_of_range("threshold", format!("{t} is negative"))),
        None => Threshold::Null(build_null_for(
            ds,
            &subsets,
            &config.null,
            config.log_base,
            config.sign,
        )?),
    };
    infer(ds, &cache, &subsets, &threshold, config)
}

/// Thresholds precomputed candidates against `threshold`.
pub fn infer(
    ds: &Dataset,
    cache: &EntropyCache,
    subsets: &[VariableSubset],
    threshold: &Threshold,
    config: &InferConfig,
) -> Result<Hypergraph> {
    let scored: Vec<Option<Edge>> = subsets
        .par_iter()
        .map(|s| {
            let d = symmetric_delta(cache, s, config.sign)?;
            if d.abs() <= threshold.for_size(s.len()) || d == 0.0 {
                return Ok(None);
            }
            let weight = match config.measure {
                EdgeMeasure::SymmetricDelta => d,
                EdgeMeasure::Phi => complexity::phi_subset(cache, s, config.sign)?,
            };
            Ok((weight != 0.0).then(|| Edge {
                members: s.clone(),
                weight,
                measure: config.measure,
            }))
        })
        .collect::<Result<_>>()?;
    let mut edges: Vec<Edge> = scored.into_iter().flatten().collect();
    if config.minimal {
        edges = minimal_edges(edges);
    }
    edges.sort_by(|a, b| {
        a.members
            .len()
            .cmp(&b.members.len())
            .then_with(|| a.members.cmp(&b.members))
    });

    let mut sizes: Vec<usize> = subsets.iter().map(VariableSubset::len).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let thresholds = sizes.iter().map(|&k| (k, threshold.for_size(k))).collect();
    let null = match threshold {
        Threshold::Null(n) => Some(&n.config),
        Threshold::Absolute(_) => None,
    };
    Ok(Hypergraph {
        version: SCHEMA_VERSION,
        vertices: ds.variables().to_vec(),
        edges,
        meta: HypergraphMeta {
            sigma: config.sigma,
            n_perm: null.map(|c| c.n_perm),
            quantile: null.map(|c| c.quantile),
            seed: null.map(|c| c.seed),
            null_statistic: null.map(|c| c.statistic),
            absolute_threshold: match threshold {
                Threshold::Absolute(t) => Some(*t),
                Threshold::Null(_) => None,
            },
            thresholds,
            target: config.target,
            minimal: config.minimal,
            log_base: config.log_base,
            sign: config.sign,
            n_samples: ds.n_samples(),
            fingerprint: ds.fingerprint(),
            tool_version: crate::VERSION.to_string(),
        },
    })
}

/// Keeps only edges that contain no other edge.
pub fn minimal_edges(edges: Vec<Edge>) -> Vec<Edge> {
    let keep: Vec<bool> = edges
        .iter()
        .map(|e| {
            !edges
                .iter()
                .any(|o| o.members != e.members && o.members.is_subset_of(&e.members))
        })
        .collect();
    edges
        .into_iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(e))
        .collect()
}

impl Hypergraph {
    /// A hypergraph from explicit edges, sorted canonically.
    pub fn from_edges(vertices: Vec<Variable>, mut edges: Vec<Edge>, meta: HypergraphMeta) -> Result<Self> {
        edges.sort_by(|a, b| {
            a.members
                .len()
                .cmp(&b.members.len())
                .then_with(|| a.members.cmp(&b.members))
        });
        let hg = Hypergraph {
            version: SCHEMA_VERSION,
            vertices,
            edges,
            meta,
        };
        hg.validate()?;
        Ok(hg)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.members.len() < 2 {
                return Err(Error::SubsetTooSmall {
                    subset: e.members.clone(),
                    size: e.members.len(),
                    min: 2,
                });
            }
            if e.members.max_index() >= self.vertices.len() {
                return Err(Error::IndexOutOfRange {
                    index: e.members.max_index(),
                    n: self.vertices.len(),
                });
            }
            if e.weight == 0.0 || !e.weight.is_finite() {
                return Err(Error::out_of_range(
                    "edge weight",
                    format!("{} on {}", e.weight, e.members),
                ));
            }
            if self.edges[..i].iter().any(|o| o.members == e.members) {
                return Err(Error::out_of_range("edges", format!("duplicate edge {}", e.members)));
            }
        }
        Ok(())
    }

    pub fn edges_of_size(&self, size: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.members.len() == size)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let hg: Hypergraph = serde_json::from_str(text)?;
        hg.validate()?;
        Ok(hg)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let hg: Hypergraph = serde_json::from_reader(file)?;
        hg.validate()?;
        Ok(hg)
    }

    /// Graphviz star expansion: one point node per hyperedge joined to its
    /// members and labeled with the weight.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph hypergraph {\n");
        out.push_str("    node [shape=ellipse];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "    v{i} [label=\"{}\"];", escape(&v.name));
        }
        for (i, e) in self.edges.iter().enumerate() {
            let _ = writeln!(out, "    e{i} [shape=point, xlabel=\"{:.4e}\"];", e.weight);
            for m in e.members.iter() {
                let _ = writeln!(out, "    e{i} -- v{m};");
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn write_dot(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_dot()).map_err(|e| Error::io(path, e))
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
