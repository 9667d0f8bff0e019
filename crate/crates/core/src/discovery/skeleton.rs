use crate::ci::CiTester;

use super::{DiscoveryError, DiscoveryState};

/// What one skeleton pass did.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SkeletonStepReport {
    /// Some adjacent pair had enough neighbours to form a conditioning set of
    /// the requested size.
    pub testable: bool,
    pub edges_deleted: usize,
}

/// One PC-style skeleton pass at conditioning-set size `order`.
///
/// Vertices are visited in ascending order, each vertex's neighbours in
/// ascending order, and candidate conditioning sets are the lexicographic
/// `order`-subsets of the current `Adj(x) \ {y}`. Deletions take effect
/// immediately, so later pairs see the thinned adjacencies.
pub fn skeleton_step(
    state: &mut DiscoveryState,
    tester: &dyn CiTester,
    order: usize,
) -> Result<SkeletonStepReport, DiscoveryError> {
    let mut report = SkeletonStepReport::default();
    let vertices = state.remaining.to_vec();
    for x in vertices {
        let ys: Vec<usize> = state.skeleton.neighbors(x).collect();
        for y in ys {
            if !state.skeleton.is_adjacent(x, y) {
                continue;
            }
            let candidates: Vec<usize> = state.skeleton.neighbors(x).filter(|&v| v != y).collect();
            if candidates.len() < order {
                continue;
            }
            report.testable = true;
            let mut found = None;
            for_each_subset(&candidates, order, |s| -> Result<bool, DiscoveryError> {
                if tester.independent(x, y, s)? {
                    found = Some(s.to_vec());
                    return Ok(true);
                }
                Ok(false)
            })?;
            if let Some(s) = found {
                state.skeleton.remove_edge(x, y);
                state.sepsets.insert(x, y, s);
                report.edges_deleted += 1;
            }
        }
    }
    state.order = order;
    Ok(report)
}

/// Visits the `k`-subsets of `items` in lexicographic order until `f` returns
/// `true`. Returns whether it stopped early.
pub(crate) fn for_each_subset<E>(
    items: &[usize],
    k: usize,
    mut f: impl FnMut(&[usize]) -> Result<bool, E>,
) -> Result<bool, E> {
    let n = items.len();
    if k > n {
        return Ok(false);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        if f(&buf)? {
            return Ok(true);
        }
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return Ok(false);
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            buf[j] = items[idx[j]];
        }
    }
}
