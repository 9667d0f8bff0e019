use super::{Dag, EdgeKind, MixedGraph};

/// The CPDAG of the Markov equivalence class of `dag`: its skeleton with
/// v-structures oriented and closed under the three Meek rules.
pub fn cpdag_of(dag: &Dag) -> MixedGraph {
    let n = dag.n_vertices();
    let mut g = MixedGraph::new(n);
    for (u, v) in dag.edges() {
        g.set_edge(u, v, EdgeKind::Undirected);
    }
    for z in 0..n {
        let pa = dag.parents(z);
        for (i, &a) in pa.iter().enumerate() {
            for &b in &pa[i + 1..] {
                if !dag.is_adjacent(a, b) {
                    g.set_edge(a, z, EdgeKind::Forward);
                    g.set_edge(b, z, EdgeKind::Forward);
                }
            }
        }
    }
    meek_closure(&mut g);
    g
}

/// Applies Meek rules R1-R3 to undirected edges until no rule fires.
///
/// Bidirected edges neither match rule patterns nor get reoriented. Returns
/// the number of edges oriented.
pub fn meek_closure(g: &mut MixedGraph) -> usize {
    let mut oriented = 0;
    loop {
        let mut changed = false;
        for (a, b, kind) in g.edges() {
            if kind != EdgeKind::Undirected {
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                if g.is_undirected(x, y) && meek_orients(g, x, y) {
                    g.set_edge(x, y, EdgeKind::Forward);
                    oriented += 1;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            return oriented;
        }
    }
}

/// Whether one of R1-R3 forces the undirected edge `x -- y` to `x -> y`.
fn meek_orients(g: &MixedGraph, x: usize, y: usize) -> bool {
    // R1: c -> x -- y, c and y non-adjacent
    if g.parents(x).any(|c| c != y && !g.is_adjacent(c, y)) {
        return true;
    }
    // R2: x -> c -> y
    if g.children(x).any(|c| g.is_directed(c, y)) {
        return true;
    }
    // R3: c -> y <- d, c and d non-adjacent, x -- c, x -- d
    let flank: Vec<usize> = g
        .undirected_neighbors(x)
        .filter(|&c| c != y && g.is_directed(c, y))
        .collect();
    for (i, &c) in flank.iter().enumerate() {
        if flank[i + 1..].iter().any(|&d| !g.is_adjacent(c, d)) {
            return true;
        }
    }
    false
}
