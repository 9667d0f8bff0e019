use std::collections::BTreeMap;

use super::{Dag, GraphError, VertexSet};

/// Mark at one end of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Tail,
    Arrow,
}

/// Edge type seen from an ordered pair `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// `x -- y`
    Undirected,
    /// `x -> y`
    Forward,
    /// `x <- y`
    Backward,
    /// `x <-> y`
    Bidirected,
}

impl EdgeKind {
    fn from_marks(at_x: Endpoint, at_y: Endpoint) -> Self {
        match (at_x, at_y) {
            (Endpoint::Tail, Endpoint::Tail) => EdgeKind::Undirected,
            (Endpoint::Tail, Endpoint::Arrow) => EdgeKind::Forward,
            (Endpoint::Arrow, Endpoint::Tail) => EdgeKind::Backward,
            (Endpoint::Arrow, Endpoint::Arrow) => EdgeKind::Bidirected,
        }
    }

    /// `(mark at x, mark at y)`.
    fn marks(self) -> (Endpoint, Endpoint) {
        match self {
            EdgeKind::Undirected => (Endpoint::Tail, Endpoint::Tail),
            EdgeKind::Forward => (Endpoint::Tail, Endpoint::Arrow),
            EdgeKind::Backward => (Endpoint::Arrow, Endpoint::Tail),
            EdgeKind::Bidirected => (Endpoint::Arrow, Endpoint::Arrow),
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            EdgeKind::Forward => EdgeKind::Backward,
            EdgeKind::Backward => EdgeKind::Forward,
            other => other,
        }
    }
}

/// Graph with at most one edge per vertex pair, where each edge end carries a
/// tail or an arrowhead. Covers skeletons, partially oriented graphs, CPDAGs
/// and the bidirected conflict edges produced by order-limited orientation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    // ends[x][y] is the mark at y's end of the edge x *-* y
    ends: Vec<BTreeMap<usize, Endpoint>>,
}

/// Correspondence between a graph and an induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMap {
    to_old: Vec<usize>,
    to_new: Vec<Option<usize>>,
}

impl VertexMap {
    pub fn identity(n: usize) -> Self {
        Self {
            to_old: (0..n).collect(),
            to_new: (0..n).map(Some).collect(),
        }
    }

    pub fn old(&self, new: usize) -> usize {
        self.to_old[new]
    }

    pub fn new_index(&self, old: usize) -> Option<usize> {
        self.to_new.get(old).copied().flatten()
    }

    /// Retained vertices in original indexing, ascending.
    pub fn retained(&self) -> &[usize] {
        &self.to_old
    }

    pub fn len(&self) -> usize {
        self.to_old.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_old.is_empty()
    }
}

impl MixedGraph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Self {
            ends: vec![BTreeMap::new(); n],
        }
    }

    /// Complete undirected graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        Self::complete_over(n, &VertexSet::full(n))
    }

    /// `n` vertices, complete undirected over `vertices`, isolated elsewhere.
    pub fn complete_over(n: usize, vertices: &VertexSet) -> Self {
        let mut g = Self::new(n);
        let vs = vertices.to_vec();
        for (i, &x) in vs.iter().enumerate() {
            for &y in &vs[i + 1..] {
                g.set_edge(x, y, EdgeKind::Undirected);
            }
        }
        g
    }

    /// The DAG with every edge directed.
    pub fn from_dag(dag: &Dag) -> Self {
        let mut g = Self::new(dag.n_vertices());
        for (u, v) in dag.edges() {
            g.set_edge(u, v, EdgeKind::Forward);
        }
        g
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, EdgeKind)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new(n);
        for (x, y, kind) in edges {
            g.add_edge(x, y, kind)?;
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.ends.len()
    }

    pub fn n_edges(&self) -> usize {
        self.ends.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn is_adjacent(&self, x: usize, y: usize) -> bool {
        self.ends[x].contains_key(&y)
    }

    /// Neighbours of `x` in ascending order, regardless of marks.
    pub fn neighbors(&self, x: usize) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.ends[x].keys().copied()
    }

    pub fn degree(&self, x: usize) -> usize {
        self.ends[x].len()
    }

    pub fn edge(&self, x: usize, y: usize) -> Option<EdgeKind> {
        let at_y = *self.ends[x].get(&y)?;
        let at_x = self.ends[y][&x];
        Some(EdgeKind::from_marks(at_x, at_y))
    }

    /// Mark at `y`'s end of the edge between `x` and `y`.
    pub fn endpoint(&self, x: usize, y: usize) -> Option<Endpoint> {
        self.ends[x].get(&y).copied()
    }

    /// Adds an edge, failing if the pair is already adjacent.
    pub fn add_edge(&mut self, x: usize, y: usize, kind: EdgeKind) -> Result<(), GraphError> {
        let n = self.n_vertices();
        for v in [x, y] {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
        }
        if x == y {
            return Err(GraphError::SelfLoop(x));
        }
        if self.is_adjacent(x, y) {
            return Err(GraphError::DuplicateEdge(x.min(y), x.max(y)));
        }
        self.set_edge(x, y, kind);
        Ok(())
    }

    /// Inserts or overwrites the edge between `x` and `y`.
    pub fn set_edge(&mut self, x: usize, y: usize, kind: EdgeKind) {
        debug_assert_ne!(x, y);
        let (at_x, at_y) = kind.marks();
        self.ends[x].insert(y, at_y);
        self.ends[y].insert(x, at_x);
    }

    /// Sets the mark at `y`'s end of an existing edge `x *-* y`.
    pub fn set_endpoint(&mut self, x: usize, y: usize, mark: Endpoint) {
        if let Some(m) = self.ends[x].get_mut(&y) {
            *m = mark;
        }
    }

    pub fn remove_edge(&mut self, x: usize, y: usize) -> bool {
        let had = self.ends[x].remove(&y).is_some();
        self.ends[y].remove(&x);
        had
    }

    /// Removes every edge incident to a vertex outside `keep`, preserving
    /// indices.
    pub fn retain_vertices(&mut self, keep: &VertexSet) {
        for x in 0..self.n_vertices() {
            if keep.contains(x) {
                self.ends[x].retain(|y, _| keep.contains(*y));
            } else {
                self.ends[x].clear();
            }
        }
    }

    /// All edges as `(x, y, kind)` with `x < y`, lexicographically ordered.
    pub fn edges(&self) -> Vec<(usize, usize, EdgeKind)> {
        let mut out = Vec::with_capacity(self.n_edges());
        for x in 0..self.n_vertices() {
            for &y in self.ends[x].range(x + 1..).map(|(y, _)| y) {
                out.push((x, y, self.edge(x, y).expect("adjacent")));
            }
        }
        out
    }

    /// Same adjacencies, every edge undirected.
    pub fn skeleton(&self) -> MixedGraph {
        let mut g = MixedGraph::new(self.n_vertices());
        for (x, y, _) in self.edges() {
            g.set_edge(x, y, EdgeKind::Undirected);
        }
        g
    }

    /// `y -> x` edges (arrowhead at `x`, tail at `y`).
    pub fn parents(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors(x)
            .filter(move |&y| self.edge(y, x) == Some(EdgeKind::Forward))
    }

    /// `x -> y` edges.
    pub fn children(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors(x)
            .filter(move |&y| self.edge(x, y) == Some(EdgeKind::Forward))
    }

    /// `x -- y` edges.
    pub fn undirected_neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors(x)
            .filter(move |&y| self.edge(x, y) == Some(EdgeKind::Undirected))
    }

    pub fn is_directed(&self, x: usize, y: usize) -> bool {
        self.edge(x, y) == Some(EdgeKind::Forward)
    }

    pub fn is_undirected(&self, x: usize, y: usize) -> bool {
        self.edge(x, y) == Some(EdgeKind::Undirected)
    }

    pub fn has_bidirected(&self) -> bool {
        self.edges()
            .iter()
            .any(|&(_, _, k)| k == EdgeKind::Bidirected)
    }

    /// Vertices `y` for which `x -> y` or `x -- y`: one step along a possibly
    /// directed path. Bidirected edges never qualify.
    pub fn possible_children(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        // a tail at x's end is what makes the step possibly directed
        self.neighbors(x)
            .filter(move |&y| self.ends[y][&x] == Endpoint::Tail)
    }

    /// Vertices `y` for which `y -> x` or `y -- x`.
    pub fn possible_parents(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors(x)
            .filter(move |&y| self.ends[x][&y] == Endpoint::Tail)
    }

    /// Every vertex with a possibly directed path into `targets`, targets
    /// included.
    pub fn possible_ancestors(&self, targets: &VertexSet) -> VertexSet {
        self.closure(targets, |g, v| g.possible_parents(v).collect())
    }

    /// Every vertex reachable from `sources` by a possibly directed path,
    /// sources included.
    pub fn possible_descendants(&self, sources: &VertexSet) -> VertexSet {
        self.closure(sources, |g, v| g.possible_children(v).collect())
    }

    fn closure(&self, start: &VertexSet, step: impl Fn(&Self, usize) -> Vec<usize>) -> VertexSet {
        let mut out = start.clone();
        let mut stack = start.to_vec();
        while let Some(v) = stack.pop() {
            for w in step(self, v) {
                if out.insert(w) {
                    stack.push(w);
                }
            }
        }
        out
    }

    /// Induced subgraph over `keep`, re-indexed to `0..|keep|` in ascending
    /// order of the original indices.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<(MixedGraph, VertexMap), GraphError> {
        if keep.is_empty() {
            return Err(GraphError::EmptySelection);
        }
        let n = self.n_vertices();
        if let Some(m) = keep.max() {
            if m >= n {
                return Err(GraphError::VertexOutOfRange { vertex: m, n });
            }
        }
        let to_old = keep.to_vec();
        let mut to_new = vec![None; n];
        for (i, &v) in to_old.iter().enumerate() {
            to_new[v] = Some(i);
        }
        let mut g = MixedGraph::new(to_old.len());
        for (x, y, kind) in self.edges() {
            if let (Some(a), Some(b)) = (to_new[x], to_new[y]) {
                g.set_edge(a, b, kind);
            }
        }
        Ok((g, VertexMap { to_old, to_new }))
    }

    /// Lifts a graph over `map`'s retained vertices back into an `n`-vertex
    /// graph in the original indexing.
    pub fn lift(&self, map: &VertexMap, n: usize) -> MixedGraph {
        let mut g = MixedGraph::new(n);
        for (x, y, kind) in self.edges() {
            g.set_edge(map.old(x), map.old(y), kind);
        }
        g
    }

    /// Structural Hamming distance: one per vertex pair whose adjacency or
    /// edge marks differ.
    pub fn shd(&self, other: &MixedGraph) -> Result<usize, GraphError> {
        if self.n_vertices() != other.n_vertices() {
            return Err(GraphError::SizeMismatch {
                left: self.n_vertices(),
                right: other.n_vertices(),
            });
        }
        let mut d = 0;
        for x in 0..self.n_vertices() {
            let keys: std::collections::BTreeSet<usize> = self.ends[x]
                .keys()
                .chain(other.ends[x].keys())
                .copied()
                .filter(|&y| y > x)
                .collect();
            d += keys
                .into_iter()
                .filter(|&y| self.edge(x, y) != other.edge(x, y))
                .count();
        }
        Ok(d)
    }
}

impl std::fmt::Debug for MixedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut list = f.debug_list();
        for (x, y, k) in self.edges() {
            let arrow = match k {
                EdgeKind::Undirected => "--",
                EdgeKind::Forward => "->",
                EdgeKind::Backward => "<-",
                EdgeKind::Bidirected => "<->",
            };
            list.entry(&format_args!("{x} {arrow} {y}"));
        }
        list.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::EdgeKind::*;
    use super::*;

    fn g(n: usize, edges: &[(usize, usize, EdgeKind)]) -> MixedGraph {
        MixedGraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn marks_are_symmetric() {
        let m = g(2, &[(0, 1, Forward)]);
        assert_eq!(m.edge(0, 1), Some(Forward));
        assert_eq!(m.edge(1, 0), Some(Backward));
        let mut m = m;
        m.set_endpoint(1, 0, Endpoint::Arrow);
        assert_eq!(m.edge(1, 0), Some(Bidirected));
        assert_eq!(m.edge(0, 1), Some(Bidirected));
    }

    #[test]
    fn possible_ancestors_follow_undirected_edges() {
        assert_eq!(g(2, &[(0, 1, Undirected)]).possible_ancestors(&[1].into()), [0, 1].into());
        let collider = g(3, &[(0, 1, Forward), (2, 1, Forward)]);
        assert_eq!(collider.possible_ancestors(&[1].into()), [0, 1, 2].into());
        assert_eq!(collider.possible_ancestors(&[0].into()), [0].into());
        let chain = g(3, &[(0, 1, Undirected), (1, 2, Undirected)]);
        assert_eq!(chain.possible_ancestors(&[2].into()), [0, 1, 2].into());
    }

    #[test]
    fn possible_descendants_mirror_ancestors() {
        let m = g(2, &[(0, 1, Forward)]);
        assert_eq!(m.possible_descendants(&[0].into()), [0, 1].into());
        assert_eq!(m.possible_descendants(&[1].into()), [1].into());
        let chain = g(3, &[(0, 1, Undirected), (1, 2, Undirected)]);
        assert_eq!(chain.possible_descendants(&[0].into()), [0, 1, 2].into());
    }

    #[test]
    fn bidirected_edges_block_possible_paths() {
        let m = g(2, &[(0, 1, Bidirected)]);
        assert_eq!(m.possible_ancestors(&[0].into()), [0].into());
        assert_eq!(m.possible_descendants(&[0].into()), [0].into());
    }

    #[test]
    fn induced_subgraph_keeps_only_internal_edges() {
        let chain = g(3, &[(0, 1, Forward), (1, 2, Forward)]);
        let (sub, map) = chain.induced_subgraph(&[0, 2].into()).unwrap();
        assert_eq!(sub.n_edges(), 0);
        assert_eq!(map.retained(), &[0, 2]);
        assert_eq!(map.new_index(2), Some(1));
        assert_eq!(map.new_index(1), None);

        let (same, id) = chain.induced_subgraph(&VertexSet::full(3)).unwrap();
        assert_eq!(same, chain);
        assert_eq!(id, VertexMap::identity(3));

        assert_eq!(chain.induced_subgraph(&VertexSet::new()).unwrap_err(), GraphError::EmptySelection);
    }

    #[test]
    fn induced_subgraph_of_conflict_example_is_a_diamond() {
        // U=0, A=1, B=2, C=3, D=4, V=5
        let dag = Dag::new(6, [(0, 1), (3, 1), (4, 1), (3, 2), (4, 2), (5, 2)]).unwrap();
        let (sub, _) = MixedGraph::from_dag(&dag)
            .induced_subgraph(&[1, 2, 3, 4].into())
            .unwrap();
        // new indices: A=0, B=1, C=2, D=3
        let diamond = g(4, &[(2, 0, Forward), (3, 0, Forward), (2, 1, Forward), (3, 1, Forward)]);
        assert_eq!(sub, diamond);
    }

    #[test]
    fn shd_counts_pairs() {
        let a = g(3, &[(0, 1, Forward), (1, 2, Forward)]);
        assert_eq!(a.shd(&a).unwrap(), 0);
        assert_eq!(g(2, &[(0, 1, Undirected)]).shd(&g(2, &[(0, 1, Forward)])).unwrap(), 1);
        assert_eq!(a.shd(&g(3, &[(0, 1, Forward)])).unwrap(), 1);
        assert_eq!(g(2, &[(0, 1, Forward)]).shd(&g(2, &[(0, 1, Bidirected)])).unwrap(), 1);
        assert!(matches!(a.shd(&MixedGraph::new(2)), Err(GraphError::SizeMismatch { .. })));
    }

    #[test]
    fn lift_inverts_induced_subgraph() {
        let m = g(4, &[(0, 2, Forward), (2, 3, Undirected)]);
        let keep: VertexSet = [0, 2, 3].into();
        let (sub, map) = m.induced_subgraph(&keep).unwrap();
        assert_eq!(sub.lift(&map, 4), m);
    }
}
