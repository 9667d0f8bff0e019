//! Brute-force reference implementations shared by the integration tests.
//! Everything here is deliberately naive and independent of the library's
//! own graph algorithms.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snap_core::graph::{parse_edge_list, EdgeKind, EdgeList};
use snap_core::{Dag, MixedGraph, VertexSet};

pub fn set(items: &[usize]) -> VertexSet {
    items.iter().copied().collect()
}

/// Random DAG: random topological order, each pair edged with probability
/// `d / (n - 1)`.
pub fn random_small_dag(rng: &mut impl Rng, n: usize, d: f64) -> Dag {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let p = if n > 1 { (d / (n - 1) as f64).min(1.0) } else { 0.0 };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((order[i], order[j]));
            }
        }
    }
    Dag::new(n, edges).unwrap()
}

/// One case of the small oracle suite.
pub struct Case {
    pub dag: Dag,
    pub targets: VertexSet,
}

/// `count` DAGs with 3 to 8 vertices, mean degree 2 or 3 and 1 to 3 targets.
pub fn oracle_suite(count: usize, seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d: f64 = if rng.random_bool(0.5) { 2.0 } else { 3.0 };
            let n = rng.random_range(if d > 2.0 { 4..=8 } else { 3..=8 });
            let dag = random_small_dag(&mut rng, n, d);
            let t = rng.random_range(1..=3usize.min(n));
            let mut all: Vec<usize> = (0..n).collect();
            all.shuffle(&mut rng);
            Case {
                dag,
                targets: all[..t].iter().copied().collect(),
            }
        })
        .collect()
}

fn reflexive_descendants(dag: &Dag, v: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::from([v]);
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for &c in dag.children(u) {
            if out.insert(c) {
                stack.push(c);
            }
        }
    }
    out
}

fn reflexive_ancestors(dag: &Dag, targets: &VertexSet) -> BTreeSet<usize> {
    let mut out: BTreeSet<usize> = targets.iter().collect();
    let mut stack: Vec<usize> = targets.iter().collect();
    while let Some(u) = stack.pop() {
        for &p in dag.parents(u) {
            if out.insert(p) {
                stack.push(p);
            }
        }
    }
    out
}

/// d-separation by enumerating every simple path of the skeleton.
pub fn dsep_by_paths(dag: &Dag, x: usize, y: usize, z: &VertexSet) -> bool {
    let n = dag.n_vertices();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..n).filter(|&w| dag.is_adjacent(v, w)).collect())
        .collect();
    let desc: Vec<BTreeSet<usize>> = (0..n).map(|v| reflexive_descendants(dag, v)).collect();
    let mut path = vec![x];
    let mut on_path = vec![false; n];
    on_path[x] = true;

    fn active(dag: &Dag, path: &[usize], z: &VertexSet, desc: &[BTreeSet<usize>]) -> bool {
        path.windows(3).all(|w| {
            let (a, m, b) = (w[0], w[1], w[2]);
            let collider = dag.has_edge(a, m) && dag.has_edge(b, m);
            if collider {
                desc[m].iter().any(|&d| z.contains(d))
            } else {
                !z.contains(m)
            }
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        dag: &Dag,
        adj: &[Vec<usize>],
        desc: &[BTreeSet<usize>],
        z: &VertexSet,
        y: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
    ) -> bool {
        let last = *path.last().unwrap();
        for &w in &adj[last] {
            if on_path[w] {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            let found = if w == y {
                active(dag, path, z, desc)
            } else {
                dfs(dag, adj, desc, z, y, path, on_path)
            };
            path.pop();
            on_path[w] = false;
            if found {
                return true;
            }
        }
        false
    }

    !dfs(dag, &adj, &desc, z, y, &mut path, &mut on_path)
}

fn v_structures(n: usize, edges: &[(usize, usize)]) -> BTreeSet<(usize, usize, usize)> {
    let has = |a: usize, b: usize| edges.contains(&(a, b));
    let adj = |a: usize, b: usize| has(a, b) || has(b, a);
    let mut out = BTreeSet::new();
    for m in 0..n {
        for a in 0..n {
            for b in a + 1..n {
                if has(a, m) && has(b, m) && !adj(a, b) {
                    out.insert((a, m, b));
                }
            }
        }
    }
    out
}

fn acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0; n];
    for &(_, b) in edges {
        indeg[b] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &(a, b) in edges {
            if a == v {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    stack.push(b);
                }
            }
        }
    }
    seen == n
}

/// Every DAG Markov equivalent to `dag`: all acyclic orientations of its
/// skeleton that keep its v-structures.
pub fn markov_equivalence_class(dag: &Dag) -> Vec<Dag> {
    let n = dag.n_vertices();
    let base: Vec<(usize, usize)> = dag.edges().collect();
    let target = v_structures(n, &base);
    let m = base.len();
    assert!(m <= 22, "too many edges for exhaustive enumeration");
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        let edges: Vec<(usize, usize)> = base
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if mask >> i & 1 == 1 { (b, a) } else { (a, b) })
            .collect();
        if acyclic(n, &edges) && v_structures(n, &edges) == target {
            out.push(Dag::new(n, edges).unwrap());
        }
    }
    out
}

/// CPDAG read off the equivalence class: an edge is directed when every
/// member agrees on its direction.
pub fn cpdag_by_enumeration(dag: &Dag) -> MixedGraph {
    let class = markov_equivalence_class(dag);
    let mut g = MixedGraph::new(dag.n_vertices());
    for (a, b) in dag.edges() {
        let fwd = class.iter().all(|d| d.has_edge(a, b));
        let bwd = class.iter().all(|d| d.has_edge(b, a));
        let kind = match (fwd, bwd) {
            (true, _) => EdgeKind::Forward,
            (_, true) => EdgeKind::Backward,
            _ => EdgeKind::Undirected,
        };
        g.add_edge(a, b, kind).unwrap();
    }
    g
}

/// Vertices that are an ancestor of some target in at least one member of
/// the equivalence class.
pub fn possible_ancestors_by_enumeration(dag: &Dag, targets: &VertexSet) -> VertexSet {
    markov_equivalence_class(dag)
        .iter()
        .flat_map(|d| reflexive_ancestors(d, targets))
        .collect()
}

/// Whether `set` contains every possible ancestor of its own members.
pub fn is_possibly_ancestral(dag: &Dag, s: &VertexSet) -> bool {
    s.is_empty() || possible_ancestors_by_enumeration(dag, s).is_subset(s)
}

/// Total effect in a linear SEM as a sum over directed paths of edge-weight
/// products.
pub fn path_sum_effect(dag: &Dag, weight: impl Fn(usize, usize) -> f64, x: usize, y: usize) -> f64 {
    fn go(dag: &Dag, w: &dyn Fn(usize, usize) -> f64, v: usize, y: usize) -> f64 {
        if v == y {
            return 1.0;
        }
        dag.children(v).iter().map(|&c| w(v, c) * go(dag, w, c, y)).sum()
    }
    go(dag, &weight, x, y)
}

/// Named graph from edge-list text.
pub fn named(text: &str) -> EdgeList {
    parse_edge_list(text).unwrap()
}

pub fn idx(el: &EdgeList, name: &str) -> usize {
    el.index_of(name).unwrap_or_else(|| panic!("no vertex {name}"))
}

pub fn names_set(el: &EdgeList, names: &[&str]) -> VertexSet {
    names.iter().map(|n| idx(el, n)).collect()
}

/// Six-vertex DAG on which SNAP(inf) needs one more test than PC for
/// targets {X1, X2}.
pub const COUNTER_EXAMPLE: &str = "\
vertices: 6
X1
X2
X3
X4
X5
X6
X2 -> X1
X3 -> X2
X4 -> X1
X4 -> X3
X5 -> X2
X5 -> X3
X6 -> X2
X6 -> X4
X6 -> X5
";

/// Order-0 conflict: U -> A <- B and A -> B <- V.
pub const BIDIRECTED_ORDER0: &str = "\
U -> A
C -> A
D -> A
C -> B
D -> B
V -> B
";

/// DAG where an order-3 skeleton search can keep a spurious A - X edge.
pub const SPURIOUS_EDGE: &str = "\
U -> A
U -> X
X -> G
G -> E
G -> C
E -> A
C -> A
A -> B
V -> B
";

/// First separating set by size, then lexicographically, among subsets of
/// the other vertices.
pub fn first_sepset(dag: &Dag, a: usize, b: usize) -> Option<Vec<usize>> {
    let others: Vec<usize> = (0..dag.n_vertices()).filter(|&v| v != a && v != b).collect();
    for size in 0..=others.len() {
        let mut found = None;
        for_each_combination(&others, size, &mut |s| {
            if found.is_none() && dsep_by_paths(dag, a, b, &s.iter().copied().collect()) {
                found = Some(s.to_vec());
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

pub fn for_each_combination(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::new(), f);
}

/// Skeleton and separating sets at the end of an order-3 search on
/// [`SPURIOUS_EDGE`] in which A - G was removed with {E, C, X} before
/// A - X could be tested with {G, U, V}, and X - B was removed with
/// {G, U, V}. The true skeleton plus the surviving A - X edge.
pub fn spurious_edge_state() -> (EdgeList, Dag, MixedGraph, snap_core::SepsetMap) {
    let el = named(SPURIOUS_EDGE);
    let dag = el.to_dag().unwrap();
    let n = dag.n_vertices();
    let (a, x) = (idx(&el, "A"), idx(&el, "X"));
    let mut skeleton = MixedGraph::new(n);
    for (u, v) in dag.edges() {
        skeleton.add_edge(u, v, EdgeKind::Undirected).unwrap();
    }
    skeleton.add_edge(a, x, EdgeKind::Undirected).unwrap();
    let mut sepsets = snap_core::SepsetMap::new();
    for u in 0..n {
        for v in u + 1..n {
            if !skeleton.is_adjacent(u, v) {
                sepsets.insert(u, v, first_sepset(&dag, u, v).expect("non-adjacent pairs separate"));
            }
        }
    }
    sepsets.insert(a, idx(&el, "G"), names_set(&el, &["E", "C", "X"]).to_vec());
    sepsets.insert(x, idx(&el, "B"), names_set(&el, &["G", "U", "V"]).to_vec());
    (el, dag, skeleton, sepsets)
}

/// Graph from `(from, to, kind)` triples over the names of `el`.
pub fn graph_over(el: &EdgeList, edges: &[(&str, &str, EdgeKind)]) -> MixedGraph {
    let mut g = MixedGraph::new(el.names.len());
    for &(a, b, k) in edges {
        g.add_edge(idx(el, a), idx(el, b), k).unwrap();
    }
    g
}
