//! Pearson and Spearman baselines; category codes are read as numbers.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::lattice::Combinations;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub r: f64,
    /// Set when a column has zero variance; `r` is then reported as 0.
    pub degenerate: bool,
}

fn product_moment(a: &[f64], b: &[f64]) -> Correlation {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Correlation {
            r: 0.0,
            degenerate: true,
        };
    }
    Correlation {
        r: (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0),
        degenerate: false,
    }
}

/// 1-based ranks; tied values share the mean of their ranks.
pub fn average_ranks(values: &[u32]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by_key(|&i| values[i]);
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn check(ds: &Dataset, i: usize, j: usize) -> Result<()> {
    let n = ds.n_vars();
    for index in [i, j] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
    }
    if ds.n_samples() < 2 {
        return Err(Error::out_of_range("n_samples", "correlation needs at least 2 samples"));
    }
    Ok(())
}

pub fn pearson(ds: &Dataset, i: usize, j: usize) -> Result<Correlation> {
    check(ds, i, j)?;
    let a: Vec<f64> = ds.column(i).iter().map(|&v| f64::from(v)).collect();
    let b: Vec<f64> = ds.column(j).iter().map(|&v| f64::from(v)).collect();
    Ok(product_moment(&a, &b))
}

pub fn spearman(ds: &Dataset, i: usize, j: usize) -> Result<Correlation> {
    check(ds, i, j)?;
    Ok(product_moment(
        &average_ranks(ds.column(i)),
        &average_ranks(ds.column(j)),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCorrelation {
    pub i: usize,
    pub j: usize,
    pub pearson: Correlation,
    pub spearman: Correlation,
}

/// Both coefficients for every unordered pair, in ascending pair order.
pub fn correlation_table(ds: &Dataset) -> Result<Vec<PairCorrelation>> {
    Combinations::new(ds.n_vars(), 2)
        .map(|pair| {
            let m = pair.members();
            Ok(PairCorrelation {
                i: m[0],
                j: m[1],
                pearson: pearson(ds, m[0], m[1])?,
                spearman: spearman(ds, m[0], m[1])?,
            })
        })
        .collect()
}
