//! Pairwise set complexity Ψ and its multi-variable generalization Φ.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::EntropyCache;
use crate::error::{Error, Result};
use crate::lattice;
use crate::measures::{self, DeltaSign};
use crate::subset::VariableSubset;

/// Normalized information distance in `[0, 1]`:
/// `max(H(i|j), H(j|i)) / max(H_i, H_j)`. Two constants have distance 0.
pub fn information_distance(cache: &EntropyCache, i: usize, j: usize) -> Result<f64> {
    let (hi, hj, hij) = pair_entropies(cache, i, j)?;
    let max_h = hi.max(hj);
    if max_h <= 0.0 {
        return Ok(0.0);
    }
    Ok((hij - hi).max(hij - hj) / max_h)
}

fn pair_entropies(cache: &EntropyCache, i: usize, j: usize) -> Result<(f64, f64, f64)> {
    let pair = VariableSubset::from_indices([i, j])?;
    if pair.len() != 2 {
        return Err(Error::SubsetTooSmall {
            subset: pair,
            size: 1,
            min: 2,
        });
    }
    Ok((cache.singleton(i)?, cache.singleton(j)?, cache.get(&pair)?))
}

/// `max(H_i, H_j) · d · (1 - d)`.
pub fn phi_pair(cache: &EntropyCache, i: usize, j: usize) -> Result<f64> {
    let (hi, hj, _) = pair_entropies(cache, i, j)?;
    let d = information_distance(cache, i, j)?;
    Ok(hi.max(hj) * d * (1.0 - d))
}

/// The same pair component written through the pairwise symmetrized delta.
pub fn phi_pair_from_delta(cache: &EntropyCache, i: usize, j: usize) -> Result<f64> {
    let (hi, hj, _) = pair_entropies(cache, i, j)?;
    let max_h = hi.max(hj);
    if max_h <= 0.0 {
        return Ok(0.0);
    }
    Ok(measures::pair_symmetric_delta(cache, i, j)? / max_h)
}

/// The same pair component as `max conditional entropy · I / max entropy`.
pub fn phi_pair_from_mutual_information(cache: &EntropyCache, i: usize, j: usize) -> Result<f64> {
    let (hi, hj, hij) = pair_entropies(cache, i, j)?;
    let max_h = hi.max(hj);
    if max_h <= 0.0 {
        return Ok(0.0);
    }
    let max_cond = (hij - hj).max(hij - hi);
    Ok(max_cond * measures::mutual_information(cache, i, j)? / max_h)
}

/// Mean of [`phi_pair`] over all unordered pairs.
pub fn psi(cache: &EntropyCache) -> Result<f64> {
    mean_over_pairs(cache, phi_pair)
}

/// Ψ evaluated through [`phi_pair_from_mutual_information`].
pub fn psi_from_mutual_information(cache: &EntropyCache) -> Result<f64> {
    mean_over_pairs(cache, phi_pair_from_mutual_information)
}

fn mean_over_pairs(cache: &EntropyCache, component: fn(&EntropyCache, usize, usize) -> Result<f64>) -> Result<f64> {
    let n = cache.n_vars();
    if n < 2 {
        return Err(Error::out_of_range(
            "variables",
            format!("{n} variables; need at least 2"),
        ));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for pair in lattice::Combinations::new(n, 2) {
        let m = pair.members();
        sum += component(cache, m[0], m[1])?;
        count += 1;
    }
    Ok(sum / count as f64)
}

/// Largest entropy among the subsets obtained by dropping one member.
pub fn drop_one_normalizer(cache: &EntropyCache, subset: &VariableSubset) -> Result<f64> {
    subset.iter().try_fold(0.0f64, |acc, i| {
        let rest = subset.without(i).ok_or(Error::SubsetTooSmall {
            subset: subset.clone(),
            size: 1,
            min: 2,
        })?;
        Ok(acc.max(cache.get(&rest)?))
    })
}

/// `Δ̄(τ) / H(τ-1)^{|τ|-1}`; 0 when the normalizer vanishes.
pub fn phi_subset(cache: &EntropyCache, subset: &VariableSubset, sign: DeltaSign) -> Result<f64> {
    Ok(phi_component(cache, subset, sign)?.phi)
}

fn phi_component(cache: &EntropyCache, subset: &VariableSubset, sign: DeltaSign) -> Result<PhiComponent> {
    let symmetric_delta = measures::symmetric_delta(cache, subset, sign)?;
    let normalizer = drop_one_normalizer(cache, subset)?;
    let scale = normalizer.powi(subset.len() as i32 - 1);
    let phi = if scale > 0.0 { symmetric_delta / scale } else { 0.0 };
    Ok(PhiComponent {
        members: subset.clone(),
        phi,
        symmetric_delta,
        normalizer,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiComponent {
    pub members: VariableSubset,
    pub phi: f64,
    pub symmetric_delta: f64,
    /// The drop-one maximum entropy used as the base of the normalizer.
    pub normalizer: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub psi: f64,
    pub phi_total: f64,
    pub max_subset_size: usize,
    /// Every subset of size `2..=max_subset_size`, ordered by size then mask.
    pub phi_by_subset: Vec<PhiComponent>,
}

impl ComplexityReport {
    /// Components with the largest `|φ|`, ties broken by subset order.
    pub fn top_k(&self, k: usize) -> Vec<&PhiComponent> {
        let mut sorted: Vec<&PhiComponent> = self.phi_by_subset.iter().collect();
        sorted.sort_by(|a, b| b.phi.abs().total_cmp(&a.phi.abs()));
        sorted.truncate(k);
        sorted
    }

    pub fn phi_of(&self, subset: &VariableSubset) -> Option<f64> {
        self.phi_by_subset.iter().find(|c| &c.members == subset).map(|c| c.phi)
    }
}

/// Ψ, Φ and every φ(τ) for `2 ≤ |τ| ≤ max_subset_size`.
pub fn phi_total(cache: &EntropyCache, max_subset_size: usize, sign: DeltaSign) -> Result<ComplexityReport> {
    let n = cache.n_vars();
    if max_subset_size < 2 || max_subset_size > n {
        return Err(Error::out_of_range(
            "max_subset_size",
            format!("{max_subset_size} not in 2..={n}"),
        ));
    }
    let subsets: Vec<VariableSubset> = lattice::subsets_by_size(n, 2, max_subset_size).collect();
    let components: Vec<PhiComponent> = subsets
        .par_iter()
        .map(|s| phi_component(cache, s, sign))
        .collect::<Result<_>>()?;
    let phi_total = components.iter().map(|c| c.phi).sum::<f64>() / components.len() as f64;
    Ok(ComplexityReport {
        psi: psi(cache)?,
        phi_total,
        max_subset_size,
        phi_by_subset: components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::exhaustive;
    use crate::entropy::LogBase;
    use approx::assert_abs_diff_eq;

    fn cache_of(ds: &crate::Dataset) -> EntropyCache {
        EntropyCache::populate(ds, ds.n_vars(), LogBase::BITS).unwrap()
    }

    fn s(ix: &[usize]) -> VariableSubset {
        VariableSubset::from_indices(ix.iter().copied()).unwrap()
    }

    #[test]
    fn distance_extremes() {
        let same = cache_of(&exhaustive(&[4], |r| vec![r[0]]));
        assert_abs_diff_eq!(information_distance(&same, 0, 1).unwrap(), 0.0);
        let indep = cache_of(&exhaustive(&[4, 4], |_| vec![]));
        assert_abs_diff_eq!(information_distance(&indep, 0, 1).unwrap(), 1.0);
        let modular = cache_of(&exhaustive(&[4], |r| vec![r[0] % 2]));
        assert_abs_diff_eq!(information_distance(&modular, 1, 0).unwrap(), 0.5, epsilon = 1e-12);
        let constants = cache_of(&crate::construct::from_rows(&[vec![0, 0], vec![0, 0]]));
        assert_eq!(information_distance(&constants, 0, 1).unwrap(), 0.0);
        assert_eq!(phi_pair(&constants, 0, 1).unwrap(), 0.0);
    }

    #[test]
    fn pair_components() {
        let same = cache_of(&exhaustive(&[4], |r| vec![r[0]]));
        assert_abs_diff_eq!(phi_pair(&same, 0, 1).unwrap(), 0.0);
        let indep = cache_of(&exhaustive(&[4, 4], |_| vec![]));
        assert_abs_diff_eq!(phi_pair(&indep, 0, 1).unwrap(), 0.0);
        let modular = cache_of(&exhaustive(&[4], |r| vec![r[0] % 2]));
        assert_abs_diff_eq!(phi_pair(&modular, 0, 1).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(phi_pair_from_delta(&modular, 0, 1).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            phi_pair_from_mutual_information(&modular, 0, 1).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_eq!(
            phi_subset(&modular, &s(&[0, 1]), DeltaSign::Product).unwrap(),
            phi_pair_from_delta(&modular, 0, 1).unwrap()
        );
    }

    #[test]
    fn psi_values() {
        let same = cache_of(&exhaustive(&[4], |r| vec![r[0], r[0], r[0]]));
        assert_abs_diff_eq!(psi(&same).unwrap(), 0.0);
        let indep = cache_of(&exhaustive(&[3, 3, 3], |_| vec![]));
        assert_abs_diff_eq!(psi(&indep).unwrap(), 0.0, epsilon = 1e-12);
        // columns X, U, X mod 2: pairs give 0.5, 0, 0
        let mixed = cache_of(&exhaustive(&[4, 4], |r| vec![r[0] % 2]));
        assert_abs_diff_eq!(psi(&mixed).unwrap(), 0.5 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(psi_from_mutual_information(&mixed).unwrap(), 0.5 / 3.0, epsilon = 1e-12);
        let single = cache_of(&exhaustive(&[2], |_| vec![]));
        assert!(psi(&single).is_err());
    }

    #[test]
    fn phi_of_collective_triplet() {
        let xyw = cache_of(&exhaustive(&[4, 4], |r| vec![(r[0] + r[1]) % 4]));
        assert_abs_diff_eq!(
            phi_subset(&xyw, &s(&[0, 1, 2]), DeltaSign::Product).unwrap(),
            -0.5,
            epsilon = 1e-12
        );
        let report = phi_total(&xyw, 3, DeltaSign::Product).unwrap();
        assert_eq!(report.phi_by_subset.len(), 4);
        assert_abs_diff_eq!(report.phi_total, -0.125, epsilon = 1e-12);
        assert_eq!(report.top_k(1)[0].members, s(&[0, 1, 2]));
        assert!(phi_total(&xyw, 1, DeltaSign::Product).is_err());
        assert!(phi_total(&xyw, 4, DeltaSign::Product).is_err());
    }

    #[test]
    fn phi_total_extremes() {
        let indep = cache_of(&exhaustive(&[2, 2, 2, 2], |_| vec![]));
        let r = phi_total(&indep, 4, DeltaSign::Product).unwrap();
        assert_abs_diff_eq!(r.phi_total, 0.0, epsilon = 1e-12);
        assert_eq!(r.phi_by_subset.len(), 11);
        let same = cache_of(&exhaustive(&[4], |r| vec![r[0], r[0], r[0]]));
        assert_abs_diff_eq!(
            phi_total(&same, 4, DeltaSign::Product).unwrap().phi_total,
            0.0,
            epsilon = 1e-12
        );
    }
}
