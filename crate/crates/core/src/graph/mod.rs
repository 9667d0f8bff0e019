//! Graph types and the structural queries the discovery code is built on.

mod cpdag;
mod dag;
mod dsep;
pub mod edgelist;
mod mixed;
mod sepset;
mod vertex_set;

pub use cpdag::{cpdag_of, meek_closure};
pub use dag::{is_acyclic, Dag};
pub use dsep::{d_separated, d_separated_by};
pub use edgelist::{parse_edge_list, write_edge_list, EdgeList};
pub use mixed::{EdgeKind, Endpoint, MixedGraph, VertexMap};
pub use sepset::SepsetMap;
pub use vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph contains a directed cycle")]
    CyclicGraph,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("empty vertex selection")]
    EmptySelection,
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("edge {0} - {1} is not directed")]
    NotDirected(String, String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
