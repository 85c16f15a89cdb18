//! Sparse symbolic node embeddings for directed, typed graphs.
//!
//! The pipeline has four file-decoupled stages:
//!
//! 1. [`graph`] — load and index a typed directed multigraph with O(1)
//!    out-neighbor access.
//! 2. [`sampler`] — draw length-distributed, order-aware random walks from
//!    every node (or a subset), producing one walk document per node.
//! 3. [`miner`] — treat the documents as a transaction database and extract
//!    a pattern vocabulary: top-d tuple k-grams or FP-Growth frequent
//!    itemsets.
//! 4. [`vectorize`] / [`eval`] — evaluate the vocabulary against each
//!    document to form a sparse node-by-pattern matrix, then score it with
//!    one-vs-rest logistic regression over stratified train/test splits.
//!
//! Every stage is deterministic given its seed, independent of worker count.

pub mod documents;
pub mod error;
pub mod eval;
pub mod graph;
pub mod miner;
pub mod sampler;
pub mod synth;
pub mod vectorize;

mod rng;

pub use error::{Error, Result};
pub use graph::{Graph, LabelSet, NodeId};
