//! Ground-truth generation for benchmarks: random DAGs, linear-Gaussian and
//! binary parameterisations, target sampling and reproducible RNG streams.

mod cpt;
mod expected;
mod sem;
mod targets;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Dag, GraphError};

pub use cpt::{binary_interventional_effect, random_cpt, sample_binary, CptSpec};
pub use expected::expected_possible_ancestors;
pub use sem::{random_sem, sample_linear_gaussian, SemSpec};
pub use targets::{sample_targets, TargetMode, TARGET_RETRIES};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SyntheticError {
    #[error("infeasible generator configuration: {0}")]
    InfeasibleConfig(String),
    #[error("no identifiable target set found in {0} draws")]
    NoIdentifiableSet(usize),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Random-DAG parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n_vertices: usize,
    pub expected_degree: f64,
    pub max_degree: usize,
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), SyntheticError> {
        let d = self.expected_degree;
        if !d.is_finite() || d < 0.0 {
            return Err(SyntheticError::InfeasibleConfig(format!("expected degree {d}")));
        }
        if d > 0.0 && d >= self.n_vertices as f64 {
            return Err(SyntheticError::InfeasibleConfig(format!(
                "expected degree {d} must be below the vertex count {}",
                self.n_vertices
            )));
        }
        if d > self.max_degree as f64 {
            return Err(SyntheticError::InfeasibleConfig(format!(
                "expected degree {d} exceeds the maximum degree {}",
                self.max_degree
            )));
        }
        Ok(())
    }
}

/// Erdős–Rényi DAG over a random vertex order.
///
/// Each pair is edged with probability `expected_degree / (n - 1)`, oriented
/// from the earlier to the later vertex in the order. Pairs are visited in a
/// random order and a pair is skipped when either endpoint is already at
/// `max_degree`.
pub fn random_dag<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<Dag, SyntheticError> {
    cfg.validate()?;
    let n = cfg.n_vertices;
    if n < 2 || cfg.expected_degree == 0.0 {
        return Ok(Dag::new(n, [])?);
    }
    let p = cfg.expected_degree / (n - 1) as f64;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for (i, j) in pairs {
        if !rng.random_bool(p) {
            continue;
        }
        let (u, v) = (order[i], order[j]);
        if degree[u] >= cfg.max_degree || degree[v] >= cfg.max_degree {
            continue;
        }
        degree[u] += 1;
        degree[v] += 1;
        edges.push((u, v));
    }
    Ok(Dag::new(n, edges)?)
}

/// What a random stream is used for; each purpose draws from its own
/// ChaCha stream so changing one never shifts another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Graph = 1,
    Parameters = 2,
    Targets = 3,
    Data = 4,
    Split = 5,
    Truth = 6,
}

/// Generator for `(seed, grid point, replicate, purpose)`.
pub fn stream_rng(seed: u64, grid: u64, replicate: u64, stream: Stream) -> ChaCha8Rng {
    let key = mix(mix(mix(seed) ^ grid) ^ replicate);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(stream as u64);
    rng
}

// splitmix64 finaliser
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
