//! Sample-size and noise sweeps over the symmetrized delta of one focus
//! subset against all other subsets of the same size.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{add_noise_with, rng_for, RNG_NAME, W, X, Y};
use crate::dataset::Dataset;
use crate::entropy::{EntropyCache, LogBase};
use crate::error::{Error, Result};
use crate::lattice::Combinations;
use crate::measures::{symmetric_delta, DeltaSign};
use crate::subset::VariableSubset;

/// Mean and sample standard deviation (`n - 1` denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    /// The subset tracked separately; `{X, Y, W}` by default.
    pub focus: VariableSubset,
    pub log_base: LogBase,
    pub sign: DeltaSign,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            focus: VariableSubset::from_indices([X, Y, W]).expect("non-empty"),
            log_base: LogBase::BITS,
            sign: DeltaSign::Product,
        }
    }
}

impl SweepSettings {
    fn order(&self) -> usize {
        self.focus.len()
    }
}

/// Symmetrized delta of every subset of the focus size, split into the focus
/// value and the rest (ascending mask order).
fn split_deltas(ds: &Dataset, settings: &SweepSettings) -> Result<(f64, Vec<f64>)> {
    let k = settings.order();
    ds.check_subset(&settings.focus)?;
    let cache = EntropyCache::populate(ds, k, settings.log_base)?;
    let mut focus = None;
    let mut others = Vec::new();
    for s in Combinations::new(ds.n_vars(), k) {
        let d = symmetric_delta(&cache, &s, settings.sign)?;
        if s == settings.focus {
            focus = Some(d);
        } else {
            others.push(d);
        }
    }
    Ok((focus.expect("focus is one of the combinations"), others))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub settings: SweepSettings,
    pub subset_size: usize,
    pub n_subsets: usize,
    pub focus_values: Vec<f64>,
    pub focus_mean: f64,
    pub focus_std: f64,
    /// Pooled over every other subset and every partition block.
    pub other_mean: f64,
    pub other_std: f64,
}

/// Splits `base` into `len / subset_size` disjoint consecutive blocks and
/// summarizes the deltas per block. A trailing remainder is dropped.
pub fn partition_experiment(base: &Dataset, subset_size: usize, settings: &SweepSettings) -> Result<PartitionReport> {
    let n_subsets = base.n_samples().checked_div(subset_size).unwrap_or(0);
    if n_subsets == 0 {
        return Err(Error::out_of_range(
            "partition",
            format!("{} samples cannot hold blocks of {subset_size}", base.n_samples()),
        ));
    }
    let blocks: Vec<(f64, Vec<f64>)> = (0..n_subsets)
        .into_par_iter()
        .map(|b| split_deltas(&base.slice_rows(b * subset_size, (b + 1) * subset_size), settings))
        .collect::<Result<_>>()?;
    let focus_values: Vec<f64> = blocks.iter().map(|b| b.0).collect();
    let others: Vec<f64> = blocks.iter().flat_map(|b| b.1.iter().copied()).collect();
    let (focus_mean, focus_std) = mean_std(&focus_values);
    let (other_mean, other_std) = mean_std(&others);
    Ok(PartitionReport {
        settings: settings.clone(),
        subset_size,
        n_subsets,
        focus_values,
        focus_mean,
        focus_std,
        other_mean,
        other_std,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementalPoint {
    pub size: usize,
    pub focus: f64,
    pub other_mean: f64,
    pub other_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementalReport {
    pub settings: SweepSettings,
    pub step: usize,
    pub points: Vec<IncrementalPoint>,
}

/// Prefixes of `base` of size `step · (i + 1)` for `i < count`.
pub fn incremental_experiment(
    base: &Dataset,
    step: usize,
    count: usize,
    settings: &SweepSettings,
) -> Result<IncrementalReport> {
    if step == 0 || count == 0 || step * count > base.n_samples() {
        return Err(Error::out_of_range(
            "incremental",
            format!("{count} steps of {step} exceed {} samples", base.n_samples()),
        ));
    }
    let points = (0..count)
        .into_par_iter()
        .map(|i| {
            let size = step * (i + 1);
            let (focus, others) = split_deltas(&base.slice_rows(0, size), settings)?;
            let (other_mean, other_std) = mean_std(&others);
            Ok(IncrementalPoint {
                size,
                focus,
                other_mean,
                other_std,
            })
        })
        .collect::<Result<_>>()?;
    Ok(IncrementalReport {
        settings: settings.clone(),
        step,
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub levels: usize,
    pub replicates: usize,
    /// Flips added per level: level `i` flips `step · (i + 1)` rows.
    pub step: usize,
    /// Variables whose cells are flipped; each gets its own row selection.
    pub targets: Vec<usize>,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            levels: 20,
            replicates: 10,
            step: 25,
            targets: vec![W],
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseLevel {
    pub level: usize,
    pub flip_count: usize,
    /// Over every (focus replicate, other subset, other replicate) combination.
    pub diff_mean: f64,
    pub diff_std: f64,
    pub n_differences: usize,
    pub focus_mean: f64,
    pub other_mean: f64,
    /// `focus_mean / other_mean`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseReport {
    pub settings: SweepSettings,
    pub config: NoiseConfig,
    pub rng: String,
    pub levels: Vec<NoiseLevel>,
}

/// Replicate `r` at level `l` draws from stream `1 + l · replicates + r`.
pub fn noise_experiment(base: &Dataset, config: &NoiseConfig, settings: &SweepSettings) -> Result<NoiseReport> {
    if config.levels == 0 || config.replicates == 0 {
        return Err(Error::out_of_range(
            "noise",
            "need at least one level and one replicate",
        ));
    }
    let jobs: Vec<(usize, usize)> = (0..config.levels)
        .flat_map(|l| (0..config.replicates).map(move |r| (l, r)))
        .collect();
    let results: Vec<(f64, Vec<f64>)> = jobs
        .par_iter()
        .map(|&(l, r)| {
            let flips = config.step * (l + 1);
            let mut rng = rng_for(config.seed, 1 + (l * config.replicates + r) as u64);
            let mut noisy = base.clone();
            for &t in &config.targets {
                noisy = add_noise_with(&noisy, t, flips.min(base.n_samples()), &mut rng)?;
            }
            split_deltas(&noisy, settings)
        })
        .collect::<Result<_>>()?;

    let levels = results
        .chunks(config.replicates)
        .enumerate()
        .map(|(level, reps)| {
            let focus: Vec<f64> = reps.iter().map(|r| r.0).collect();
            let others: Vec<f64> = reps.iter().flat_map(|r| r.1.iter().copied()).collect();
            let diffs: Vec<f64> = focus.iter().flat_map(|&a| others.iter().map(move |&b| a - b)).collect();
            let (diff_mean, diff_std) = mean_std(&diffs);
            let focus_mean = mean_std(&focus).0;
            let other_mean = mean_std(&others).0;
            NoiseLevel {
                level,
                flip_count: (config.step * (level + 1)).min(base.n_samples()),
                diff_mean,
                diff_std,
                n_differences: diffs.len(),
                focus_mean,
                other_mean,
                ratio: focus_mean / other_mean,
            }
        })
        .collect();
    Ok(NoiseReport {
        settings: settings.clone(),
        config: config.clone(),
        rng: RNG_NAME.to_string(),
        levels,
    })
}

fn io(e: std::io::Error) -> Error {
    Error::io("<report output>", e)
}

pub fn write_partition_tsv<W: Write>(reports: &[PartitionReport], mut out: W) -> Result<()> {
    writeln!(out, "size\tn_subsets\tfocus_mean\tfocus_std\tother_mean\tother_std").map_err(io)?;
    for r in reports {
        writeln!(
            out,
            "{}\t{}\t{:.6}\t{:.6}\t{:.6e}\t{:.6e}",
            r.subset_size, r.n_subsets, r.focus_mean, r.focus_std, r.other_mean, r.other_std
        )
        .map_err(io)?;
    }
    Ok(())
}

pub fn write_incremental_tsv<W: Write>(report: &IncrementalReport, mut out: W) -> Result<()> {
    writeln!(out, "size\tfocus\tother_mean\tother_std").map_err(io)?;
    for p in &report.points {
        writeln!(
            out,
            "{}\t{:.6}\t{:.6e}\t{:.6e}",
            p.size, p.focus, p.other_mean, p.other_std
        )
        .map_err(io)?;
    }
    Ok(())
}

pub fn write_noise_tsv<W: Write>(report: &NoiseReport, mut out: W) -> Result<()> {
    writeln!(out, "level\tflips\tdiff_mean\tdiff_std\tfocus_mean\tother_mean\tratio").map_err(io)?;
    for l in &report.levels {
        writeln!(
            out,
            "{}\t{}\t{:.6e}\t{:.6e}\t{:.6e}\t{:.6e}\t{:.6}",
            l.level, l.flip_count, l.diff_mean, l.diff_std, l.focus_mean, l.other_mean, l.ratio
        )
        .map_err(io)?;
    }
    Ok(())
}
