//! Reference computations that work directly on rows, sharing no code with
//! the library's counting and caching paths.
#![allow(dead_code)]

use std::collections::BTreeMap;

use interdep_core::construct::from_rows;
use interdep_core::Dataset;
use rand::Rng;

pub fn rows(ds: &Dataset) -> Vec<Vec<u32>> {
    (0..ds.n_samples())
        .map(|r| (0..ds.n_vars()).map(|j| ds.column(j)[r]).collect())
        .collect()
}

/// Plug-in entropy in bits of the projection of `rows` onto `vars`.
pub fn entropy(rows: &[Vec<u32>], vars: &[usize]) -> f64 {
    let mut counts: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for row in rows {
        *counts.entry(vars.iter().map(|&v| row[v]).collect()).or_default() += 1;
    }
    let n = rows.len() as f64;
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Non-empty subsets of `vars`, each as a list.
pub fn nonempty_subsets(vars: &[usize]) -> Vec<Vec<usize>> {
    (1u32..(1 << vars.len()))
        .map(|bits| {
            vars.iter()
                .enumerate()
                .filter(|(k, _)| bits >> k & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

/// Inclusion–exclusion over joint entropies of `rows`.
pub fn interaction(rows: &[Vec<u32>], vars: &[usize]) -> f64 {
    nonempty_subsets(vars)
        .iter()
        .map(|t| {
            let sign = if t.len() % 2 == 1 { 1.0 } else { -1.0 };
            sign * entropy(rows, t)
        })
        .sum()
}

/// Rows grouped by the value of `given`.
pub fn strata(rows: &[Vec<u32>], given: usize) -> Vec<Vec<Vec<u32>>> {
    let mut groups: BTreeMap<u32, Vec<Vec<u32>>> = BTreeMap::new();
    for row in rows {
        groups.entry(row[given]).or_default().push(row.clone());
    }
    groups.into_values().collect()
}

/// `Σ_x p(x) · interaction(vars | given = x)`.
pub fn conditional_interaction(rows: &[Vec<u32>], vars: &[usize], given: usize) -> f64 {
    let n = rows.len() as f64;
    strata(rows, given)
        .iter()
        .map(|g| g.len() as f64 / n * interaction(g, vars))
        .sum()
}

/// `I(a; b | c)` from stratified mutual informations.
pub fn conditional_mi(rows: &[Vec<u32>], a: usize, b: usize, c: usize) -> f64 {
    let n = rows.len() as f64;
    strata(rows, c)
        .iter()
        .map(|g| g.len() as f64 / n * (entropy(g, &[a]) + entropy(g, &[b]) - entropy(g, &[a, b])))
        .sum()
}

/// A random dataset mixing uniform columns with noisy sums of earlier ones.
pub fn random_dataset<R: Rng>(rng: &mut R, n_vars: usize, n_samples: usize) -> Dataset {
    let cards: Vec<u32> = (0..n_vars).map(|_| rng.random_range(2..=4)).collect();
    let mut cols: Vec<Vec<u32>> = Vec::with_capacity(n_vars);
    let recipes: Vec<Option<(usize, usize)>> = (0..n_vars)
        .map(|j| (j >= 2 && rng.random_bool(0.5)).then(|| (rng.random_range(0..j), rng.random_range(0..j))))
        .collect();
    for j in 0..n_vars {
        let card = cards[j];
        let col = (0..n_samples)
            .map(|r| match recipes[j] {
                Some((a, b)) if !rng.random_bool(0.15) => (cols[a][r] + cols[b][r]) % card,
                _ => rng.random_range(0..card),
            })
            .collect();
        cols.push(col);
    }
    let rows: Vec<Vec<u32>> = (0..n_samples).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    from_rows(&rows)
}
