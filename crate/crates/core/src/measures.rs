//! Interaction information and its differential and symmetrized forms.
//!
//! Every quantity here is an alternating sum of cached joint entropies; the
//! raw data is never consulted. For a subset `v` and target `t ∈ v`:
//!
//! * `I(v)  = Σ_{τ⊆v} (-1)^{|τ|+1} H(τ)`
//! * `Δ_t(v) = I(v) - I(v∖{t}) = Σ_{t∈τ⊆v} (-1)^{|τ|+1} H(τ)`
//! * `Δ̄(v)  = Π_{t∈v} Δ_t(v)` for `|v| ≥ 3`
//! * `Δ̄(i,j) = -(H_i + H_j - H_ij)(min(H_i, H_j) - H_ij)` for pairs

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dataset::Variable;
use crate::entropy::{EntropyCache, LogBase};
use crate::error::{Error, Result};
use crate::subset::VariableSubset;

/// Sign applied to the symmetrized product for subsets of three or more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaSign {
    /// The bare product of the per-target deltas.
    #[default]
    Product,
    /// The product multiplied by `(-1)^|v|`.
    Alternating,
}

fn parity(len: usize) -> f64 {
    if len.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn require_size(subset: &VariableSubset, min: usize) -> Result<()> {
    let size = subset.len();
    if size < min {
        return Err(Error::SubsetTooSmall {
            subset: subset.clone(),
            size,
            min,
        });
    }
    Ok(())
}

/// `I(i;j) = H_i + H_j - H_ij`.
pub fn mutual_information(cache: &EntropyCache, i: usize, j: usize) -> Result<f64> {
    let pair = VariableSubset::from_indices([i, j])?;
    require_size(&pair, 2)?;
    Ok(cache.singleton(i)? + cache.singleton(j)? - cache.get(&pair)?)
}

/// Inclusion–exclusion over all non-empty sub-subsets.
pub fn interaction_information(cache: &EntropyCache, subset: &VariableSubset) -> Result<f64> {
    require_size(subset, 2)?;
    subset
        .subsets()
        .try_fold(0.0, |acc, t| Ok(acc - parity(t.len()) * cache.get(&t)?))
}

/// Change in interaction information when `target` joins the rest of `subset`.
pub fn delta(cache: &EntropyCache, subset: &VariableSubset, target: usize) -> Result<f64> {
    require_size(subset, 3)?;
    if !subset.contains(target) {
        return Err(Error::TargetNotInSubset {
            target,
            subset: subset.clone(),
        });
    }
    delta_unchecked(cache, subset, target)
}

fn delta_unchecked(cache: &EntropyCache, subset: &VariableSubset, target: usize) -> Result<f64> {
    let mut acc = -cache.singleton(target)? * parity(1);
    if let Some(rest) = subset.without(target) {
        for t in rest.subsets() {
            let tau = t.with(target);
            acc -= parity(tau.len()) * cache.get(&tau)?;
        }
    }
    Ok(acc)
}

/// Per-target deltas in ascending target order.
pub fn deltas_by_target(cache: &EntropyCache, subset: &VariableSubset) -> Result<Vec<(usize, f64)>> {
    require_size(subset, 3)?;
    subset
        .iter()
        .map(|t| delta_unchecked(cache, subset, t).map(|d| (t, d)))
        .collect()
}

/// The symmetrized differential interaction information.
pub fn symmetric_delta(cache: &EntropyCache, subset: &VariableSubset, sign: DeltaSign) -> Result<f64> {
    require_size(subset, 2)?;
    if subset.len() == 2 {
        let m = subset.members();
        return pair_symmetric_delta(cache, m[0], m[1]);
    }
    let product: f64 = deltas_by_target(cache, subset)?.iter().map(|&(_, d)| d).product();
    Ok(match sign {
        DeltaSign::Product => product,
        DeltaSign::Alternating => parity(subset.len()) * product,
    })
}

/// `-(H_i + H_j - H_ij)(min(H_i, H_j) - H_ij)`; symmetric in `i`, `j`.
pub fn pair_symmetric_delta(cache: &EntropyCache, i: usize, j: usize) -> Result<f64> {
    let pair = VariableSubset::from_indices([i, j])?;
    require_size(&pair, 2)?;
    let (hi, hj, hij) = (cache.singleton(i)?, cache.singleton(j)?, cache.get(&pair)?);
    Ok(-(hi + hj - hij) * (hi.min(hj) - hij))
}

/// Interaction information of every non-empty sub-subset; singletons map to
/// their entropy.
pub fn interaction_table(cache: &EntropyCache, subset: &VariableSubset) -> Result<HashMap<VariableSubset, f64>> {
    subset
        .subsets()
        .map(|t| {
            let v = if t.len() == 1 {
                cache.get(&t)?
            } else {
                interaction_information(cache, &t)?
            };
            Ok((t, v))
        })
        .collect()
}

/// Reconstructs `H(subset)` from interaction informations by Möbius inversion:
/// `H(v) = -Σ_{τ⊆v} (-1)^{|τ|} I(τ)`.
pub fn entropy_from_interactions(interactions: &HashMap<VariableSubset, f64>, subset: &VariableSubset) -> Result<f64> {
    subset.subsets().try_fold(0.0, |acc, t| {
        let i = interactions
            .get(&t)
            .ok_or_else(|| Error::MissingInteraction(t.clone()))?;
        Ok(acc - parity(t.len()) * i)
    })
}

/// All measures for one subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub subset: VariableSubset,
    pub interaction_info: f64,
    /// Empty for pairs.
    pub delta_by_target: BTreeMap<usize, f64>,
    pub symmetric_delta: f64,
    pub n_samples: usize,
    pub log_base: LogBase,
}

impl MeasureReport {
    pub fn compute(cache: &EntropyCache, subset: &VariableSubset, sign: DeltaSign) -> Result<Self> {
        let delta_by_target = if subset.len() >= 3 {
            deltas_by_target(cache, subset)?.into_iter().collect()
        } else {
            BTreeMap::new()
        };
        Ok(Self {
            subset: subset.clone(),
            interaction_info: interaction_information(cache, subset)?,
            delta_by_target,
            symmetric_delta: symmetric_delta(cache, subset, sign)?,
            n_samples: cache.n_samples(),
            log_base: cache.log_base(),
        })
    }
}

/// One JSON object per line.
pub fn write_jsonl<W: Write>(reports: &[MeasureReport], mut out: W) -> Result<()> {
    for r in reports {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(|e| Error::io("<jsonl output>", e))?;
    }
    Ok(())
}

/// Tab-separated summary; deltas are written as `name:value` pairs.
pub fn write_tsv<W: Write>(reports: &[MeasureReport], variables: &[Variable], mut out: W) -> Result<()> {
    let io = |e| Error::io("<tsv output>", e);
    writeln!(out, "subset\tsize\tinteraction_info\tsymmetric_delta\tdelta_by_target").map_err(io)?;
    for r in reports {
        let names: Vec<&str> = r.subset.iter().map(|i| variables[i].name.as_str()).collect();
        let deltas: Vec<String> = r
            .delta_by_target
            .iter()
            .map(|(&t, d)| format!("{}:{d:.6}", variables[t].name))
            .collect();
        writeln!(
            out,
            "{}\t{}\t{:.6}\t{:.6e}\t{}",
            names.join(","),
            r.subset.len(),
            r.interaction_info,
            r.symmetric_delta,
            deltas.join(";")
        )
        .map_err(io)?;
    }
    Ok(())
}
