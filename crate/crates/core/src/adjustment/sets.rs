use crate::graph::{Endpoint, MixedGraph, VertexSet};

use super::AdjustmentError;

/// Possibly directed reachability from `start`, never entering `blocked`.
pub(crate) fn reach_avoiding(g: &MixedGraph, start: &VertexSet, blocked: usize, forward: bool) -> VertexSet {
    let mut seen = start.clone();
    let mut stack = start.to_vec();
    while let Some(v) = stack.pop() {
        let next: Vec<usize> = if forward {
            g.possible_children(v).collect()
        } else {
            g.possible_parents(v).collect()
        };
        for w in next {
            if w != blocked && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

fn check_pair(g: &MixedGraph, x: usize, y: usize) -> Result<(), AdjustmentError> {
    let n = g.n_vertices();
    if x >= n || y >= n || x == y {
        return Err(AdjustmentError::InvalidQuery(format!(
            "cause {x} and outcome {y} must be distinct vertices below {n}"
        )));
    }
    Ok(())
}

/// `true` when some possibly directed path leads from `x` to `y`.
pub fn has_possibly_directed_path(g: &MixedGraph, x: usize, y: usize) -> bool {
    g.possible_descendants(&VertexSet::singleton(x)).contains(y)
}

/// Vertices other than `x` on a possibly directed path from `x` to `y` that
/// visits `x` only at its start.
pub fn causal_nodes(g: &MixedGraph, x: usize, y: usize) -> Result<VertexSet, AdjustmentError> {
    check_pair(g, x, y)?;
    let first: VertexSet = g.possible_children(x).collect();
    let down = reach_avoiding(g, &first, x, true);
    if !down.contains(y) {
        return Ok(VertexSet::new());
    }
    let up = reach_avoiding(g, &VertexSet::singleton(y), x, false);
    Ok(down.intersection(&up))
}

/// Possible descendants of the causal nodes.
pub fn forbidden_set(g: &MixedGraph, x: usize, y: usize) -> Result<VertexSet, AdjustmentError> {
    Ok(g.possible_descendants(&causal_nodes(g, x, y)?))
}

/// Every possibly directed path from `x` to `y` leaves `x` through a
/// directed edge.
pub fn is_amenable(g: &MixedGraph, x: usize, y: usize) -> Result<bool, AdjustmentError> {
    check_pair(g, x, y)?;
    for u in g.undirected_neighbors(x).collect::<Vec<_>>() {
        if reach_avoiding(g, &VertexSet::singleton(u), x, true).contains(y) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_amenable(g: &MixedGraph, x: usize, y: usize) -> Result<(), AdjustmentError> {
    if is_amenable(g, x, y)? {
        Ok(())
    } else {
        Err(AdjustmentError::NotIdentifiable { cause: x, outcome: y })
    }
}

/// `PossAn({x, y}) \ (Forb ∪ {x, y})`.
pub fn canonical_adjustment(g: &MixedGraph, x: usize, y: usize) -> Result<VertexSet, AdjustmentError> {
    require_amenable(g, x, y)?;
    let mut out = g
        .possible_ancestors(&[x, y].into())
        .difference(&forbidden_set(g, x, y)?);
    out.remove(x);
    out.remove(y);
    Ok(out)
}

/// `Pa(Cn) \ (Forb ∪ {x})` with definite parents only.
pub fn optimal_adjustment(g: &MixedGraph, x: usize, y: usize) -> Result<VertexSet, AdjustmentError> {
    require_amenable(g, x, y)?;
    let cn = causal_nodes(g, x, y)?;
    let parents: VertexSet = cn.iter().flat_map(|c| g.parents(c)).collect();
    let mut out = parents.difference(&g.possible_descendants(&cn));
    out.remove(x);
    Ok(out)
}

/// Definite parents of `x`; every edge at `x` must be directed.
pub fn parent_adjustment(g: &MixedGraph, x: usize) -> Result<VertexSet, AdjustmentError> {
    let mut out = VertexSet::new();
    for v in g.neighbors(x) {
        match (g.endpoint(v, x), g.endpoint(x, v)) {
            (Some(Endpoint::Arrow), Some(Endpoint::Tail)) => {
                out.insert(v);
            }
            (Some(Endpoint::Tail), Some(Endpoint::Arrow)) => {}
            _ => return Err(AdjustmentError::UndirectedIncidence(x)),
        }
    }
    Ok(out)
}
