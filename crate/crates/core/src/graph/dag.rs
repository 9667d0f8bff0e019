use std::collections::{BTreeSet, VecDeque};

use super::{GraphError, VertexSet};

/// Immutable directed acyclic graph over dense vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Dag {
    /// Builds a DAG, rejecting self-loops, duplicate edges, out-of-range
    /// vertices and directed cycles.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            parents[v].push(u);
            children[u].push(v);
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort_unstable();
        }
        let dag = Self {
            parents,
            children,
            labels: None,
        };
        dag.topological_order()?;
        Ok(dag)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n_vertices() {
            return Err(GraphError::SizeMismatch {
                left: self.n_vertices(),
                right: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Labels if present, otherwise `X1..Xn`.
    pub fn names(&self) -> Vec<String> {
        match &self.labels {
            Some(l) => l.clone(),
            None => default_names(self.n_vertices()),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.parents.len()
    }

    pub fn n_edges(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.children[u].binary_search(&v).is_ok()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    /// Edges as `(parent, child)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(u, ch)| ch.iter().map(move |&v| (u, v)))
    }

    /// Kahn's algorithm, always releasing the smallest ready index first.
    pub fn topological_order(&self) -> Result<Vec<usize>, GraphError> {
        topological_order(self.n_vertices(), |v| &self.children[v], |v| self.parents[v].len())
    }

    /// Vertices with a directed path into `targets`, targets included.
    pub fn ancestors(&self, targets: &VertexSet) -> VertexSet {
        reach(targets, |v| &self.parents[v])
    }

    /// Vertices reachable by a directed path from `sources`, sources included.
    pub fn descendants(&self, sources: &VertexSet) -> VertexSet {
        reach(sources, |v| &self.children[v])
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

fn reach<'a>(start: &VertexSet, next: impl Fn(usize) -> &'a [usize]) -> VertexSet {
    let mut out = start.clone();
    let mut stack: Vec<usize> = start.to_vec();
    while let Some(v) = stack.pop() {
        for &w in next(v) {
            if out.insert(w) {
                stack.push(w);
            }
        }
    }
    out
}

fn topological_order<'a>(
    n: usize,
    children: impl Fn(usize) -> &'a [usize],
    in_degree: impl Fn(usize) -> usize,
) -> Result<Vec<usize>, GraphError> {
    let mut remaining: Vec<usize> = (0..n).map(&in_degree).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| remaining[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in children(v) {
            remaining[c] -= 1;
            if remaining[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() != n {
        return Err(GraphError::CyclicGraph);
    }
    Ok(order)
}

/// `true` when the directed edge list over `n` vertices has no cycle.
pub fn is_acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut children = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &(u, v) in edges {
        children[u].push(v);
        indeg[v] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop_front() {
        seen += 1;
        for &c in &children[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                queue.push_back(c);
            }
        }
    }
    seen == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topological_order_of_edgeless_graph_is_a_permutation() {
        let dag = Dag::new(3, []).unwrap();
        let mut order = dag.topological_order().unwrap();
        order.sort_unstable();
        assert_eq!(order, vec![0, 1, 2]);
    }

    #[test]
    fn chain_order_is_forced() {
        let dag = Dag::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(dag.topological_order().unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn two_cycle_is_rejected() {
        assert_eq!(Dag::new(2, [(0, 1), (1, 0)]), Err(GraphError::CyclicGraph));
        assert!(!is_acyclic(2, &[(0, 1), (1, 0)]));
    }

    #[test]
    fn malformed_edges_are_rejected() {
        assert_eq!(Dag::new(2, [(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(Dag::new(2, [(0, 1), (0, 1)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(matches!(Dag::new(2, [(0, 5)]), Err(GraphError::VertexOutOfRange { .. })));
    }

    #[test]
    fn ancestors_are_reflexive() {
        // A -> B -> C
        let chain = Dag::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(chain.ancestors(&[2].into()), [0, 1, 2].into());
        // A -> C <- B
        let collider = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
        assert_eq!(collider.ancestors(&[0].into()), [0].into());
    }

    #[test]
    fn ancestors_in_conflicting_vstructure_example() {
        // U=0, A=1, B=2, C=3, D=4, V=5
        let dag = Dag::new(6, [(0, 1), (3, 1), (4, 1), (3, 2), (4, 2), (5, 2)]).unwrap();
        assert_eq!(dag.ancestors(&[1].into()), [0, 1, 3, 4].into());
    }
}
