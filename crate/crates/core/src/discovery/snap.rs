use std::time::Instant;

use crate::ci::{CiTester, MemoTester};
use crate::graph::{meek_closure, MixedGraph, SepsetMap, VertexSet};

use super::orient::{orient_vstructures_pc, orient_vstructures_rfci, prune_non_ancestors};
use super::skeleton::skeleton_step;
use super::{DiscoveryError, DiscoveryResult, DiscoveryState, RfciPass};

/// Global algorithm run on the vertices that survive a SNAP(k) prefilter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlobalAlgorithm {
    Pc,
}

struct Partial {
    rfci: Vec<RfciPass>,
    graph: MixedGraph,
    remaining: VertexSet,
    sepsets: SepsetMap,
}

fn check_vertices(vertices: &VertexSet, n: usize) -> Result<(), DiscoveryError> {
    match vertices.max() {
        Some(v) if v >= n => Err(crate::graph::GraphError::VertexOutOfRange { vertex: v, n }.into()),
        _ => Ok(()),
    }
}

fn check_targets(vertices: &VertexSet, targets: &VertexSet) -> Result<(), DiscoveryError> {
    if targets.is_empty() {
        return Err(DiscoveryError::EmptyTargets);
    }
    match targets.iter().find(|&t| !vertices.contains(t)) {
        Some(t) => Err(DiscoveryError::TargetNotInVertices(t)),
        None => Ok(()),
    }
}

fn max_order(vertices: &VertexSet) -> usize {
    vertices.len().saturating_sub(2)
}

/// Runs `body` against a fresh memo over `tester` and packages the result.
fn run(
    tester: &dyn CiTester,
    body: impl FnOnce(&MemoTester) -> Result<Partial, DiscoveryError>,
) -> Result<DiscoveryResult, DiscoveryError> {
    let before = tester.counter().snapshot();
    let start = Instant::now();
    let memo = MemoTester::new(tester);
    let out = body(&memo)?;
    let wall_time = start.elapsed();
    let (graph, vertex_map) = out.graph.induced_subgraph(&out.remaining)?;
    Ok(DiscoveryResult {
        graph,
        vertex_map,
        remaining: out.remaining,
        sepsets: out.sepsets,
        tests: tester.counter().snapshot().since(&before),
        wall_time,
        n_vertices: tester.n_vertices(),
        rfci: out.rfci,
    })
}

/// Per-order skeleton search with pruning after every order up to `k`.
fn snap_loop(
    vertices: &VertexSet,
    targets: &VertexSet,
    k: usize,
    tester: &dyn CiTester,
) -> Result<DiscoveryState, DiscoveryError> {
    let mut state = DiscoveryState::new(tester.n_vertices(), vertices);
    for order in 0..=k {
        state.skeleton.retain_vertices(&state.remaining);
        let report = skeleton_step(&mut state, tester, order)?;
        if order < 2 {
            state.oriented = orient_vstructures_pc(&state.skeleton, &state.sepsets)?;
        } else {
            let out = orient_vstructures_rfci(&state.skeleton, &state.sepsets, tester)?;
            state.rfci.push(RfciPass { order, stats: out.stats });
            state.oriented = out.oriented;
            state.skeleton = out.skeleton;
            state.sepsets = out.sepsets;
        }
        let next = prune_non_ancestors(&state.oriented, targets).intersection(&state.remaining);
        let unchanged = next == state.remaining;
        state.remaining = next;
        // Later orders would see the same skeleton and repeat cached RFCI
        // queries, so the outcome is already final.
        if order >= 2 && !report.testable && unchanged {
            break;
        }
    }
    state.oriented.retain_vertices(&state.remaining);
    Ok(state)
}

fn pc_loop(vertices: &VertexSet, tester: &dyn CiTester) -> Result<(MixedGraph, SepsetMap), DiscoveryError> {
    let mut state = DiscoveryState::new(tester.n_vertices(), vertices);
    let mut order = 0;
    while skeleton_step(&mut state, tester, order)?.testable {
        order += 1;
    }
    let mut g = orient_vstructures_pc(&state.skeleton, &state.sepsets)?;
    meek_closure(&mut g);
    Ok((g, state.sepsets))
}

/// SNAP(k): skeleton search up to order `k`, pruning definite non-ancestors
/// of `targets` after each order.
pub fn snap_k(
    vertices: &VertexSet,
    targets: &VertexSet,
    k: usize,
    tester: &dyn CiTester,
) -> Result<DiscoveryResult, DiscoveryError> {
    check_vertices(vertices, tester.n_vertices())?;
    check_targets(vertices, targets)?;
    if k > max_order(vertices) {
        return Err(DiscoveryError::InvalidOrder {
            k,
            max: max_order(vertices),
        });
    }
    run(tester, |memo| {
        let st = snap_loop(vertices, targets, k, memo)?;
        Ok(Partial {
            graph: st.oriented,
            remaining: st.remaining,
            sepsets: st.sepsets,
            rfci: st.rfci,
        })
    })
}

/// SNAP(∞): SNAP at full depth, Meek closure, and a final prune.
pub fn snap_inf(
    vertices: &VertexSet,
    targets: &VertexSet,
    tester: &dyn CiTester,
) -> Result<DiscoveryResult, DiscoveryError> {
    check_vertices(vertices, tester.n_vertices())?;
    check_targets(vertices, targets)?;
    run(tester, |memo| {
        let mut st = snap_loop(vertices, targets, max_order(vertices), memo)?;
        meek_closure(&mut st.oriented);
        let remaining = prune_non_ancestors(&st.oriented, targets).intersection(&st.remaining);
        st.oriented.retain_vertices(&remaining);
        Ok(Partial {
            graph: st.oriented,
            remaining,
            sepsets: st.sepsets,
            rfci: st.rfci,
        })
    })
}

/// PC over `vertices`: full skeleton search, v-structures, Meek closure.
pub fn pc(vertices: &VertexSet, tester: &dyn CiTester) -> Result<DiscoveryResult, DiscoveryError> {
    check_vertices(vertices, tester.n_vertices())?;
    run(tester, |memo| {
        let (graph, sepsets) = pc_loop(vertices, memo)?;
        Ok(Partial {
            graph,
            remaining: vertices.clone(),
            sepsets,
            rfci: Vec::new(),
        })
    })
}

/// SNAP(k) followed by `algorithm` on the surviving vertices. Both phases
/// share one cache, so a query repeated by the second phase is not recounted.
pub fn snap_prefilter_then(
    algorithm: GlobalAlgorithm,
    vertices: &VertexSet,
    targets: &VertexSet,
    k: usize,
    tester: &dyn CiTester,
) -> Result<DiscoveryResult, DiscoveryError> {
    check_vertices(vertices, tester.n_vertices())?;
    check_targets(vertices, targets)?;
    if k > max_order(vertices) {
        return Err(DiscoveryError::InvalidOrder {
            k,
            max: max_order(vertices),
        });
    }
    run(tester, |memo| {
        let st = snap_loop(vertices, targets, k, memo)?;
        let (graph, sepsets) = match algorithm {
            GlobalAlgorithm::Pc => pc_loop(&st.remaining, memo)?,
        };
        Ok(Partial {
            graph,
            remaining: st.remaining,
            sepsets,
            rfci: st.rfci,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::OracleTester;
    use crate::graph::{cpdag_of, Dag, EdgeKind};

    fn fig1a() -> Dag {
        // U=0, A=1, B=2, C=3, D=4, V=5
        Dag::new(6, [(0, 1), (3, 1), (4, 1), (3, 2), (4, 2), (5, 2)]).unwrap()
    }

    #[test]
    fn snap_zero_prunes_b_and_v_on_conflict_example() {
        let oracle = OracleTester::new(fig1a());
        let r = snap_k(&VertexSet::full(6), &[1].into(), 0, &oracle).unwrap();
        assert_eq!(r.remaining, [0, 1, 3, 4].into());
        assert_eq!(r.graph.n_vertices(), 4);
    }

    #[test]
    fn chain_root_target_keeps_whole_undirected_chain() {
        // C -> B -> A is Markov equivalent, so B and C are possible ancestors of A
        let oracle = OracleTester::new(Dag::new(3, [(0, 1), (1, 2)]).unwrap());
        let r = snap_inf(&VertexSet::full(3), &[0].into(), &oracle).unwrap();
        assert_eq!(r.remaining, [0, 1, 2].into());
        assert_eq!(r.graph.n_edges(), 2);
        assert!(r.graph.is_undirected(0, 1) && r.graph.is_undirected(1, 2));
    }

    #[test]
    fn all_targets_recovers_cpdag() {
        let dag = fig1a();
        let oracle = OracleTester::new(dag.clone());
        let all = VertexSet::full(6);
        let r = snap_inf(&all, &all, &oracle).unwrap();
        assert_eq!(r.full_graph(), cpdag_of(&dag));
        let p = pc(&all, &oracle).unwrap();
        assert_eq!(p.full_graph(), cpdag_of(&dag));
    }

    #[test]
    fn pc_on_collider() {
        let dag = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
        let r = pc(&VertexSet::full(3), &OracleTester::new(dag)).unwrap();
        assert_eq!(r.graph.edge(0, 2), Some(EdgeKind::Forward));
        assert_eq!(r.graph.edge(1, 2), Some(EdgeKind::Forward));
    }

    #[test]
    fn reported_counts_match_distinct_inner_calls() {
        let oracle = OracleTester::new(fig1a());
        let r = snap_prefilter_then(GlobalAlgorithm::Pc, &VertexSet::full(6), &[2].into(), 1, &oracle).unwrap();
        assert_eq!(r.tests.total(), oracle.counter().total());
    }

    #[test]
    fn preconditions_are_checked() {
        let oracle = OracleTester::new(fig1a());
        let all = VertexSet::full(6);
        assert!(matches!(snap_k(&all, &VertexSet::new(), 0, &oracle), Err(DiscoveryError::EmptyTargets)));
        assert!(matches!(snap_k(&all, &all, 5, &oracle), Err(DiscoveryError::InvalidOrder { k: 5, max: 4 })));
        assert!(matches!(
            snap_k(&[0, 1].into(), &[2].into(), 0, &oracle),
            Err(DiscoveryError::TargetNotInVertices(2))
        ));
    }
}
