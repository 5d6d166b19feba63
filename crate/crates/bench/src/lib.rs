//! Shared fixtures for the benchmarks.

use interdep_core::simulator::{generate, DependencyKind, DependencySpec};
use interdep_core::Dataset;

/// A simulated `W(X, Y)` set of the given size.
pub fn fixture(n_samples: usize) -> Dataset {
    generate(&DependencySpec {
        kind: DependencyKind::WOfXy,
        n_samples,
        seed: 17,
    })
    .expect("fixture")
}
