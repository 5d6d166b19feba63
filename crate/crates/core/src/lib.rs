//! Entropy-based detection of multivariable dependencies in discrete data.
//!
//! A [`Dataset`] holds integer-coded categorical columns. An [`EntropyCache`]
//! stores joint entropies of variable subsets, from which [`measures`]
//! derives interaction information and the conditional-mutual-information
//! deltas, [`complexity`] derives normalized set complexities, and
//! [`hypergraph`] thresholds the deltas into a weighted dependency
//! hypergraph. [`simulator`] generates the synthetic benchmark sets.

pub mod complexity;
pub mod construct;
pub mod dataset;
pub mod entropy;
pub mod error;
pub mod hypergraph;
pub mod lattice;
pub mod measures;
pub mod simulator;
pub mod subset;

pub use complexity::{ComplexityReport, PhiComponent};
pub use dataset::{Dataset, Delimiter, LabelMap, LoadOptions, Variable};
pub use entropy::{EntropyCache, EntropyEstimator, LogBase, PlugIn};
pub use error::{Error, Result};
pub use hypergraph::{Edge, EdgeMeasure, Hypergraph, InferConfig, NullConfig, NullDistribution, NullStatistic};
pub use measures::{DeltaSign, MeasureReport};
pub use subset::VariableSubset;

/// Version string embedded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
