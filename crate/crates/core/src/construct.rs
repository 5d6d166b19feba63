//! Exact constructed datasets.
//!
//! An exhaustive dataset lists every combination of its base variables once,
//! so plug-in entropies equal the exact entropies of the uniform product
//! distribution. Repeating rows encodes non-uniform rational weights.

use crate::dataset::Dataset;

/// One row per combination of base values (`cards[i]` values for variable
/// `i`), with extra columns computed by `derive` from each base row.
///
/// Columns are named `V0, V1, ...`; cardinalities are inferred.
pub fn exhaustive<F>(cards: &[u32], derive: F) -> Dataset
where
    F: Fn(&[u32]) -> Vec<u32>,
{
    let mut rows = Vec::new();
    let mut current = vec![0u32; cards.len()];
    loop {
        let mut row = current.clone();
        row.extend(derive(&current));
        rows.push(row);
        let mut i = cards.len();
        loop {
            if i == 0 {
                return from_rows(&rows);
            }
            i -= 1;
            current[i] += 1;
            if current[i] < cards[i] {
                break;
            }
            current[i] = 0;
        }
    }
}

/// A dataset from row-major codes; cardinalities inferred.
pub fn from_rows(rows: &[Vec<u32>]) -> Dataset {
    let width = rows.first().map_or(0, Vec::len);
    let columns: Vec<Vec<u32>> = (0..width).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let names = (0..width).map(|j| format!("V{j}")).collect();
    Dataset::from_columns(names, columns).expect("constructed rows are rectangular")
}

/// Every pairing of a row of `a` with a row of `b`; makes `b`'s variables
/// exactly independent of `a`'s.
pub fn cartesian(a: &Dataset, b: &Dataset) -> Dataset {
    let mut rows = Vec::with_capacity(a.n_samples() * b.n_samples());
    for ra in 0..a.n_samples() {
        for rb in 0..b.n_samples() {
            let mut row: Vec<u32> = (0..a.n_vars()).map(|j| a.column(j)[ra]).collect();
            row.extend((0..b.n_vars()).map(|j| b.column(j)[rb]));
            rows.push(row);
        }
    }
    from_rows(&rows)
}
