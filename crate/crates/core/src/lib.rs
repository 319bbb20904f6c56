//! Comparison indicators and node comparison insights over property graphs.
//!
//! The pipeline has four stages:
//!
//! 1. [`graph`]: load a property graph, infer its graph type and the
//!    cardinality of every relationship.
//! 2. [`context`]: enumerate the paths around a node type and derive the
//!    candidate indicators reachable through them.
//! 3. [`validation`]: evaluate, filter, scale and attenuate candidates
//!    into an [`IndicatorMatrix`].
//! 4. [`insight`]: split the indicators into comparison, grouping and
//!    unused sets, cluster the nodes and rank same-cluster pairs.
//!
//! [`io`] holds the file formats and the synthetic graph generator,
//! [`bench`] the experimental harness.

pub mod bench;
pub mod cli;
pub mod context;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod insight;
pub mod io;
pub mod matrix;
pub mod validation;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, IndicatorMatrix};
