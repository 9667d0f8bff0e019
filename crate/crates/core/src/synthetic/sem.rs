use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::ci::Dataset;
use crate::graph::Dag;

use super::SyntheticError;

/// Linear-Gaussian SEM: `X_v = Σ w_pv X_p + σ_v ε_v` with standard normal `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemSpec {
    dag: Dag,
    weights: BTreeMap<(usize, usize), f64>,
    noise_sd: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SemJson {
    names: Vec<String>,
    edges: Vec<WeightedEdge>,
    noise_sd: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct WeightedEdge {
    from: usize,
    to: usize,
    weight: f64,
}

impl SemSpec {
    /// `weights` must hold exactly the edges of `dag`.
    pub fn new(dag: Dag, weights: BTreeMap<(usize, usize), f64>, noise_sd: Vec<f64>) -> Result<Self, SyntheticError> {
        if weights.len() != dag.n_edges() || dag.edges().any(|e| !weights.contains_key(&e)) {
            return Err(SyntheticError::InvalidSpec("weights must match the DAG edges".into()));
        }
        if noise_sd.len() != dag.n_vertices() || noise_sd.iter().any(|s| s.is_nan() || *s < 0.0) {
            return Err(SyntheticError::InvalidSpec("one nonnegative noise scale per vertex".into()));
        }
        Ok(Self { dag, weights, noise_sd })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.weights.get(&(from, to)).copied().unwrap_or(0.0)
    }

    pub fn weights(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.weights
    }

    pub fn noise_sd(&self) -> &[f64] {
        &self.noise_sd
    }

    pub fn to_json(&self) -> String {
        let record = SemJson {
            names: self.dag.names(),
            edges: self
                .weights
                .iter()
                .map(|(&(from, to), &weight)| WeightedEdge { from, to, weight })
                .collect(),
            noise_sd: self.noise_sd.clone(),
        };
        serde_json::to_string_pretty(&record).expect("spec serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, SyntheticError> {
        let r: SemJson = serde_json::from_str(text).map_err(|e| SyntheticError::InvalidSpec(e.to_string()))?;
        let n = r.names.len();
        let dag = Dag::new(n, r.edges.iter().map(|e| (e.from, e.to)))?.with_labels(r.names)?;
        let weights = r.edges.iter().map(|e| ((e.from, e.to), e.weight)).collect();
        Self::new(dag, weights, r.noise_sd)
    }
}

/// Weights with magnitude uniform in `[0.5, 3]` and a random sign; unit noise.
pub fn random_sem<R: Rng + ?Sized>(dag: &Dag, rng: &mut R) -> SemSpec {
    let weights = dag
        .edges()
        .map(|e| {
            let magnitude = rng.random_range(0.5..=3.0);
            (e, if rng.random_bool(0.5) { magnitude } else { -magnitude })
        })
        .collect();
    SemSpec {
        dag: dag.clone(),
        weights,
        noise_sd: vec![1.0; dag.n_vertices()],
    }
}

/// Forward sampling in topological order.
pub fn sample_linear_gaussian<R: Rng + ?Sized>(spec: &SemSpec, n: usize, rng: &mut R) -> Dataset {
    let p = spec.dag.n_vertices();
    let mut cols = vec![vec![0.0; n]; p];
    let order = spec.dag.topological_order().expect("Dag is acyclic");
    for &v in &order {
        let sd = spec.noise_sd[v];
        for c in cols[v].iter_mut() {
            let e: f64 = StandardNormal.sample(rng);
            *c = sd * e;
        }
        for &pa in spec.dag.parents(v) {
            let w = spec.weight(pa, v);
            let (src, dst) = if pa < v {
                let (a, b) = cols.split_at_mut(v);
                (&a[pa], &mut b[0])
            } else {
                let (a, b) = cols.split_at_mut(pa);
                (&b[0], &mut a[v])
            };
            for (d, s) in dst.iter_mut().zip(src) {
                *d += w * s;
            }
        }
    }
    Dataset::continuous(spec.dag.names(), cols).expect("finite Gaussian samples")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn edgeless_columns_are_standard() {
        let spec = random_sem(&Dag::new(3, []).unwrap(), &mut ChaCha8Rng::seed_from_u64(0));
        let d = sample_linear_gaussian(&spec, 10_000, &mut ChaCha8Rng::seed_from_u64(1));
        for j in 0..3 {
            let mean = d.column(j).iter().sum::<f64>() / 10_000.0;
            assert!(mean.abs() < 0.05, "{mean}");
        }
    }

    #[test]
    fn covariance_of_single_edge() {
        let dag = Dag::new(2, [(0, 1)]).unwrap();
        let spec = SemSpec::new(dag, BTreeMap::from([((0, 1), 2.0)]), vec![1.0; 2]).unwrap();
        let d = sample_linear_gaussian(&spec, 10_000, &mut ChaCha8Rng::seed_from_u64(2));
        let (x, y) = (d.column(0), d.column(1));
        let mx = x.iter().sum::<f64>() / 1e4;
        let my = y.iter().sum::<f64>() / 1e4;
        let cov = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / 9999.0;
        assert!((cov - 2.0).abs() < 0.1, "{cov}");
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let dag = Dag::new(3, [(0, 1), (2, 1)]).unwrap();
        let spec = random_sem(&dag, &mut ChaCha8Rng::seed_from_u64(3));
        for w in spec.weights().values() {
            assert!((0.5..=3.0).contains(&w.abs()));
        }
        let a = sample_linear_gaussian(&spec, 50, &mut ChaCha8Rng::seed_from_u64(4));
        let b = sample_linear_gaussian(&spec, 50, &mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip() {
        let dag = Dag::new(3, [(0, 1), (2, 1)]).unwrap();
        let spec = random_sem(&dag, &mut ChaCha8Rng::seed_from_u64(5));
        let back = SemSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back.weights(), spec.weights());
        assert_eq!(back.dag().edges().collect::<Vec<_>>(), dag.edges().collect::<Vec<_>>());
        assert!(SemSpec::new(dag, BTreeMap::new(), vec![1.0; 3]).is_err());
    }
}
