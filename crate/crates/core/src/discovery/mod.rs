//! Constraint-based structure learning: the PC baseline and target-focused
//! SNAP(k) / SNAP(∞) with possible-ancestor pruning.
//!
//! Every entry point wraps the caller's tester in a [`MemoTester`], so a
//! query repeated within one run is answered from cache and the reported
//! counts are distinct tests.

mod orient;
mod skeleton;
mod snap;

use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::ci::{CiError, TestCounts};
use crate::graph::{write_edge_list, GraphError, MixedGraph, SepsetMap, VertexMap, VertexSet};

pub use crate::graph::meek_closure;
pub use orient::{
    orient_vstructures_pc, orient_vstructures_rfci, prune_non_ancestors, unshielded_triples, RfciOutcome,
    RfciStats,
};
pub use skeleton::{skeleton_step, SkeletonStepReport};
pub use snap::{pc, snap_inf, snap_k, snap_prefilter_then, GlobalAlgorithm};

#[derive(Debug, Error)]
pub enum DiscoveryError {
    #[error("no separating set recorded for non-adjacent pair ({0}, {1})")]
    MissingSepset(usize, usize),
    #[error("target set is empty")]
    EmptyTargets,
    #[error("target {0} is not among the discovery vertices")]
    TargetNotInVertices(usize),
    #[error("maximum order {k} exceeds {max}")]
    InvalidOrder { k: usize, max: usize },
    #[error(transparent)]
    Ci(#[from] CiError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Mutable state threaded through the per-order loop.
#[derive(Debug, Clone)]
pub struct DiscoveryState {
    pub remaining: VertexSet,
    /// Undirected skeleton over the full index range; only `remaining` has edges.
    pub skeleton: MixedGraph,
    pub sepsets: SepsetMap,
    pub oriented: MixedGraph,
    pub order: usize,
    pub rfci: Vec<RfciPass>,
}

/// Statistics of the RFCI orientation run after skeleton order `order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RfciPass {
    pub order: usize,
    pub stats: RfciStats,
}

impl DiscoveryState {
    /// Complete undirected graph over `vertices`.
    pub fn new(n: usize, vertices: &VertexSet) -> Self {
        let skeleton = MixedGraph::complete_over(n, vertices);
        Self {
            remaining: vertices.clone(),
            oriented: skeleton.clone(),
            skeleton,
            sepsets: SepsetMap::new(),
            order: 0,
            rfci: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscoveryResult {
    /// Output graph re-indexed over `remaining` in ascending order.
    pub graph: MixedGraph,
    pub vertex_map: VertexMap,
    pub remaining: VertexSet,
    pub sepsets: SepsetMap,
    /// Distinct tests by conditioning-set size.
    pub tests: TestCounts,
    pub wall_time: Duration,
    pub n_vertices: usize,
    /// One entry per RFCI orientation pass, in order.
    pub rfci: Vec<RfciPass>,
}

#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    total_tests: u64,
    tests_by_order: &'a TestCounts,
    remaining: Vec<&'a str>,
    wall_time_ms: f64,
}

impl DiscoveryResult {
    /// Output graph on the original index range.
    pub fn full_graph(&self) -> MixedGraph {
        self.graph.lift(&self.vertex_map, self.n_vertices)
    }

    /// Edge list of the re-indexed graph using the original names.
    pub fn to_edge_list(&self, names: &[String]) -> String {
        let local: Vec<String> = self.vertex_map.retained().iter().map(|&v| names[v].clone()).collect();
        write_edge_list(&self.graph, &local)
    }

    /// Metrics record accompanying the edge list.
    pub fn sidecar_json(&self, names: &[String]) -> String {
        let record = Sidecar {
            total_tests: self.tests.total(),
            tests_by_order: &self.tests,
            remaining: self.remaining.iter().map(|v| names[v].as_str()).collect(),
            wall_time_ms: self.wall_time.as_secs_f64() * 1e3,
        };
        serde_json::to_string_pretty(&record).expect("sidecar serialises")
    }

    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.graph == other.graph
            && self.vertex_map == other.vertex_map
            && self.remaining == other.remaining
            && self.sepsets == other.sepsets
            && self.tests == other.tests
    }
}
