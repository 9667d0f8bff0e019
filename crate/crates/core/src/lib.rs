//! Targeted causal discovery by sequential non-ancestor pruning.
//!
//! Given observational data (or an oracle) and a handful of target variables,
//! the SNAP algorithms learn only the part of the CPDAG made of possible
//! ancestors of the targets, then estimate pairwise causal effects between
//! targets with efficient adjustment sets.

pub mod adjustment;
pub mod bench;
pub mod ci;
pub mod discovery;
pub mod synthetic;
pub mod graph;

pub use graph::{Dag, EdgeKind, GraphError, MixedGraph, SepsetMap, VertexSet};
