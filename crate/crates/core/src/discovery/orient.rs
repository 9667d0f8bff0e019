use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::ci::{CiTester, MemoTester};
use crate::graph::{Endpoint, MixedGraph, SepsetMap, VertexSet};

use super::DiscoveryError;

/// Unshielded triples `(x, z, y)` with `x < y`, sorted lexicographically.
pub fn unshielded_triples(g: &MixedGraph) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for z in 0..g.n_vertices() {
        let nb: Vec<usize> = g.neighbors(z).collect();
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                if !g.is_adjacent(x, y) {
                    out.push((x, z, y));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn sepset_of(sepsets: &SepsetMap, x: usize, y: usize) -> Result<&[usize], DiscoveryError> {
    sepsets.get(x, y).ok_or(DiscoveryError::MissingSepset(x, y))
}

/// Arrowheads at `z` on both `x *-* z` and `y *-* z`; any mark already at the
/// far ends is left alone, so competing triples produce `<->`.
fn orient_collider(g: &mut MixedGraph, x: usize, z: usize, y: usize) {
    g.set_endpoint(x, z, Endpoint::Arrow);
    g.set_endpoint(y, z, Endpoint::Arrow);
}

/// PC v-structure orientation on an undirected skeleton.
pub fn orient_vstructures_pc(skeleton: &MixedGraph, sepsets: &SepsetMap) -> Result<MixedGraph, DiscoveryError> {
    let mut g = skeleton.clone();
    for (x, z, y) in unshielded_triples(skeleton) {
        if !sepset_of(sepsets, x, y)?.contains(&z) {
            orient_collider(&mut g, x, z, y);
        }
    }
    Ok(g)
}

/// Counters from one RFCI orientation pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RfciStats {
    /// Triples whose middle vertex was outside the separating set.
    pub triples_processed: usize,
    pub edges_deleted: usize,
    /// Largest separating set handed to the minimisation loop.
    pub max_sepset: usize,
    /// Distinct tests issued by this pass.
    pub tests: u64,
}

#[derive(Debug, Clone)]
pub struct RfciOutcome {
    pub oriented: MixedGraph,
    pub sepsets: SepsetMap,
    /// Input skeleton minus the edges deleted here.
    pub skeleton: MixedGraph,
    pub stats: RfciStats,
}

/// RFCI v-structure orientation.
///
/// The worklist starts with the unshielded triples in lexicographic order and
/// is consumed from the front; triples created by an edge deletion are
/// appended. A triple is only oriented when both of its edges survive a
/// dependence check given the separating set of its endpoints.
pub fn orient_vstructures_rfci(
    skeleton: &MixedGraph,
    sepsets: &SepsetMap,
    outer: &dyn CiTester,
) -> Result<RfciOutcome, DiscoveryError> {
    let before = outer.counter().total();
    let memo = MemoTester::new(outer);
    let tester: &dyn CiTester = &memo;
    let mut u = skeleton.clone();
    let mut sepsets = sepsets.clone();
    let mut stats = RfciStats::default();

    let mut queue: VecDeque<(usize, usize, usize)> = unshielded_triples(&u).into();
    let mut queued: HashSet<(usize, usize, usize)> = queue.iter().copied().collect();
    let mut legit: BTreeSet<(usize, usize, usize)> = BTreeSet::new();

    while let Some((x, z, y)) = queue.pop_front() {
        queued.remove(&(x, z, y));
        let sep = sepset_of(&sepsets, x, y)?.to_vec();
        if sep.contains(&z) {
            continue;
        }
        stats.triples_processed += 1;
        if !tester.independent(x, z, &sep)? && !tester.independent(z, y, &sep)? {
            legit.insert((x, z, y));
            continue;
        }
        for v in [x, y] {
            if !tester.independent(v, z, &sep)? {
                continue;
            }
            stats.max_sepset = stats.max_sepset.max(sep.len());
            let minimal = minimise_sepset(tester, v, z, sep.clone())?;
            sepsets.insert(v, z, minimal);

            let (lo, hi) = (v.min(z), v.max(z));
            for w in u.neighbors(lo).filter(|&w| u.is_adjacent(w, hi)).collect::<Vec<_>>() {
                if queued.insert((lo, w, hi)) {
                    queue.push_back((lo, w, hi));
                }
            }
            let uses_edge = |&(a, m, b): &(usize, usize, usize)| {
                let e = (v.min(z), v.max(z));
                (a.min(m), a.max(m)) == e || (m.min(b), m.max(b)) == e
            };
            queue.retain(|t| !uses_edge(t));
            queued.retain(|t| !uses_edge(t));
            legit.retain(|t| !uses_edge(t));
            u.remove_edge(v, z);
            stats.edges_deleted += 1;
        }
    }

    stats.tests = outer.counter().total() - before;
    let mut oriented = u.clone();
    for &(x, z, y) in &legit {
        orient_collider(&mut oriented, x, z, y);
    }
    Ok(RfciOutcome {
        oriented,
        sepsets,
        skeleton: u,
        stats,
    })
}

/// Greedy single-element removal while `v` and `z` stay independent.
fn minimise_sepset(
    tester: &dyn CiTester,
    v: usize,
    z: usize,
    mut set: Vec<usize>,
) -> Result<Vec<usize>, DiscoveryError> {
    'outer: loop {
        for i in 0..set.len() {
            let mut smaller = set.clone();
            smaller.remove(i);
            if tester.independent(v, z, &smaller)? {
                set = smaller;
                continue 'outer;
            }
        }
        return Ok(set);
    }
}

/// Vertices with a possibly directed path to some target.
pub fn prune_non_ancestors(g: &MixedGraph, targets: &VertexSet) -> VertexSet {
    g.possible_ancestors(targets)
}
