//! Simulated six-variable datasets, noise injection and the sample-size and
//! noise experiments built on them.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`. Each
//! independent unit of work (a dataset, a noise replicate, a permutation)
//! draws from its own ChaCha stream number, so results do not depend on
//! scheduling.

pub mod correlation;
pub mod experiment;
pub mod tables;

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Variable};
use crate::error::{Error, Result};

/// Name of the generator behind every seeded stream.
pub const RNG_NAME: &str = "chacha8";

/// Column order of simulated datasets.
pub const VARIABLE_NAMES: [&str; 6] = ["X", "Y", "Z", "W", "U", "V"];
pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const W: usize = 3;
pub const U: usize = 4;
pub const V: usize = 5;

const CARDINALITY: u32 = 4;

/// A seeded generator on a given stream.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DependencyKind {
    Independent,
    WOfX,
    WOfXy,
    WOfXyz,
}

impl DependencyKind {
    pub const ALL: [DependencyKind; 4] = [
        DependencyKind::Independent,
        DependencyKind::WOfX,
        DependencyKind::WOfXy,
        DependencyKind::WOfXyz,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DependencyKind::Independent => "independent",
            DependencyKind::WOfX => "w_of_x",
            DependencyKind::WOfXy => "w_of_xy",
            DependencyKind::WOfXyz => "w_of_xyz",
        }
    }
}

impl fmt::Display for DependencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DependencyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::out_of_range("dependency kind", s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencySpec {
    pub kind: DependencyKind,
    pub n_samples: usize,
    pub seed: u64,
}

/// Draws `n_samples` rows of `X, Y, Z, W, U, V`. All but `W` are iid uniform
/// over `0..4`; `W` is the table lookup for the kind (uniform too when
/// independent).
pub fn generate(spec: &DependencySpec) -> Result<Dataset> {
    if spec.n_samples == 0 {
        return Err(Error::out_of_range("n_samples", "need at least one sample"));
    }
    let mut rng = rng_for(spec.seed, 0);
    let mut columns: Vec<Vec<u32>> = (0..6).map(|_| Vec::with_capacity(spec.n_samples)).collect();
    for _ in 0..spec.n_samples {
        let mut row = [0u32; 6];
        for (j, cell) in row.iter_mut().enumerate() {
            if j != W {
                *cell = rng.random_range(0..CARDINALITY);
            }
        }
        row[W] = match spec.kind {
            DependencyKind::Independent => rng.random_range(0..CARDINALITY),
            DependencyKind::WOfX => tables::w_of_x(row[X]),
            DependencyKind::WOfXy => tables::w_of_xy(row[X], row[Y]),
            DependencyKind::WOfXyz => tables::w_of_xyz(row[X], row[Y], row[Z]),
        };
        for (col, v) in columns.iter_mut().zip(row) {
            col.push(v);
        }
    }
    let variables = VARIABLE_NAMES
        .iter()
        .map(|n| Variable {
            name: n.to_string(),
            cardinality: CARDINALITY,
        })
        .collect();
    Dataset::new(variables, columns)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub target: usize,
    pub flip_count: usize,
    pub seed: u64,
    /// Stream number for the noise generator.
    #[serde(default)]
    pub stream: u64,
}

/// Changes `flip_count` distinct rows of the target column, each to a
/// uniformly chosen different category.
pub fn add_noise(ds: &Dataset, spec: &NoiseSpec) -> Result<Dataset> {
    let mut rng = rng_for(spec.seed, spec.stream);
    add_noise_with(ds, spec.target, spec.flip_count, &mut rng)
}

pub fn add_noise_with<R: Rng>(ds: &Dataset, target: usize, flip_count: usize, rng: &mut R) -> Result<Dataset> {
    let n = ds.n_samples();
    if target >= ds.n_vars() {
        return Err(Error::IndexOutOfRange {
            index: target,
            n: ds.n_vars(),
        });
    }
    if flip_count > n {
        return Err(Error::out_of_range(
            "flip_count",
            format!("{flip_count} exceeds {n} samples"),
        ));
    }
    let card = ds.variables()[target].cardinality;
    if flip_count > 0 && card < 2 {
        return Err(Error::out_of_range(
            "flip_count",
            format!("variable {target} has a single category"),
        ));
    }
    let mut out = ds.clone();
    let column = &mut out.columns_mut()[target];
    for row in index::sample(rng, n, flip_count) {
        let shift = rng.random_range(1..card);
        column[row] = (column[row] + shift) % card;
    }
    Ok(out)
}
