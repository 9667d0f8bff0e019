use std::collections::HashMap;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adjustment::sets::reach_avoiding;
use crate::graph::{cpdag_of, Dag, MixedGraph, VertexSet};

use super::SyntheticError;

/// Draws attempted before identifiable target sampling gives up.
pub const TARGET_RETRIES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetMode {
    /// Uniform without replacement.
    Random,
    /// Every ordered pair amenable in the CPDAG and every target an ancestor
    /// or descendant of another target.
    Identifiable,
}

/// Samples `n_targets` distinct vertices of `dag`.
pub fn sample_targets<R: Rng + ?Sized>(
    dag: &Dag,
    n_targets: usize,
    mode: TargetMode,
    rng: &mut R,
) -> Result<VertexSet, SyntheticError> {
    let n = dag.n_vertices();
    if n_targets == 0 || n_targets > n {
        return Err(SyntheticError::InvalidSpec(format!(
            "cannot draw {n_targets} targets from {n} vertices"
        )));
    }
    let draw = |rng: &mut R| -> VertexSet { sample(rng, n, n_targets).into_iter().collect() };
    if mode == TargetMode::Random {
        return Ok(draw(rng));
    }
    if n_targets < 2 {
        return Err(SyntheticError::NoIdentifiableSet(0));
    }
    let cpdag = cpdag_of(dag);
    let mut checker = Checker {
        dag,
        cpdag: &cpdag,
        blocked: HashMap::new(),
        related: HashMap::new(),
    };
    for _ in 0..TARGET_RETRIES {
        let t = draw(rng);
        if checker.accepts(&t) {
            return Ok(t);
        }
    }
    Err(SyntheticError::NoIdentifiableSet(TARGET_RETRIES))
}

struct Checker<'a> {
    dag: &'a Dag,
    cpdag: &'a MixedGraph,
    /// Outcomes `y` for which the pair `(x, y)` is not amenable.
    blocked: HashMap<usize, VertexSet>,
    /// Ancestors and descendants of `x`.
    related: HashMap<usize, VertexSet>,
}

impl Checker<'_> {
    fn accepts(&mut self, t: &VertexSet) -> bool {
        for x in t {
            let (dag, cpdag) = (self.dag, self.cpdag);
            let related = self.related.entry(x).or_insert_with(|| {
                let one = VertexSet::singleton(x);
                dag.ancestors(&one).union(&dag.descendants(&one))
            });
            if !t.iter().any(|y| y != x && related.contains(y)) {
                return false;
            }
            let blocked = self.blocked.entry(x).or_insert_with(|| {
                let mut out = VertexSet::new();
                for u in cpdag.undirected_neighbors(x) {
                    out = out.union(&reach_avoiding(cpdag, &VertexSet::singleton(u), x, true));
                }
                out
            });
            if t.iter().any(|y| y != x && blocked.contains(y)) {
                return false;
            }
        }
        true
    }
}
