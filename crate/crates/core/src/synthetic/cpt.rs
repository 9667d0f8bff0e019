use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ci::Dataset;
use crate::graph::Dag;

use super::SyntheticError;

/// Binary Bayesian network.
///
/// `tables[v][c]` is `P(X_v = 1)` under parent configuration `c`, where bit
/// `i` of `c` is the value of the `i`-th parent in ascending index order.
#[derive(Debug, Clone, PartialEq)]
pub struct CptSpec {
    dag: Dag,
    tables: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct CptJson {
    names: Vec<String>,
    tables: Vec<CptRow>,
}

#[derive(Serialize, Deserialize)]
struct CptRow {
    vertex: usize,
    parents: Vec<usize>,
    p_one: Vec<f64>,
}

impl CptSpec {
    pub fn new(dag: Dag, tables: Vec<Vec<f64>>) -> Result<Self, SyntheticError> {
        if tables.len() != dag.n_vertices() {
            return Err(SyntheticError::InvalidSpec("one table per vertex".into()));
        }
        for (v, t) in tables.iter().enumerate() {
            if t.len() != 1 << dag.parents(v).len() {
                return Err(SyntheticError::InvalidSpec(format!("table of vertex {v} has {} rows", t.len())));
            }
            if t.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(SyntheticError::InvalidSpec(format!("table of vertex {v} holds a non-probability")));
            }
        }
        Ok(Self { dag, tables })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn table(&self, v: usize) -> &[f64] {
        &self.tables[v]
    }

    pub fn to_json(&self) -> String {
        let record = CptJson {
            names: self.dag.names(),
            tables: (0..self.dag.n_vertices())
                .map(|v| CptRow {
                    vertex: v,
                    parents: self.dag.parents(v).to_vec(),
                    p_one: self.tables[v].clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&record).expect("spec serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, SyntheticError> {
        let r: CptJson = serde_json::from_str(text).map_err(|e| SyntheticError::InvalidSpec(e.to_string()))?;
        let n = r.names.len();
        let mut edges = Vec::new();
        let mut tables = vec![Vec::new(); n];
        for row in r.tables {
            if row.vertex >= n {
                return Err(SyntheticError::InvalidSpec(format!("vertex {} out of range", row.vertex)));
            }
            edges.extend(row.parents.iter().map(|&p| (p, row.vertex)));
            tables[row.vertex] = row.p_one;
        }
        let dag = Dag::new(n, edges)?.with_labels(r.names)?;
        Self::new(dag, tables)
    }

    fn draw(&self, v: usize, values: &[u8], u: f64) -> u8 {
        let config = self.dag.parents(v).iter().enumerate().fold(0usize, |c, (i, &p)| c | (values[p] as usize) << i);
        u8::from(u < self.tables[v][config])
    }
}

/// Tables with every probability uniform on `[0, 1]`.
pub fn random_cpt<R: Rng + ?Sized>(dag: &Dag, rng: &mut R) -> CptSpec {
    let tables = (0..dag.n_vertices())
        .map(|v| (0..1usize << dag.parents(v).len()).map(|_| rng.random::<f64>()).collect())
        .collect();
    CptSpec {
        dag: dag.clone(),
        tables,
    }
}

/// Forward sampling; one uniform per vertex and row.
pub fn sample_binary<R: Rng + ?Sized>(spec: &CptSpec, n: usize, rng: &mut R) -> Dataset {
    let p = spec.dag.n_vertices();
    let order = spec.dag.topological_order().expect("Dag is acyclic");
    let mut cols = vec![vec![0.0; n]; p];
    let mut row = vec![0u8; p];
    // Rows are drawn one at a time so each row consumes a contiguous run of the stream.
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for &v in &order {
            row[v] = spec.draw(v, &row, rng.random());
            cols[v][i] = f64::from(row[v]);
        }
    }
    Dataset::categorical(spec.dag.names(), cols).expect("binary samples")
}

/// Monte Carlo estimate of `E[Y | do(X=1)] - E[Y | do(X=0)]` using the same
/// uniforms for both interventions.
pub fn binary_interventional_effect<R: Rng + ?Sized>(spec: &CptSpec, x: usize, y: usize, n_mc: usize, rng: &mut R) -> f64 {
    let p = spec.dag.n_vertices();
    let order = spec.dag.topological_order().expect("Dag is acyclic");
    let mut uniforms = vec![0.0; p];
    let mut hi = vec![0u8; p];
    let mut lo = vec![0u8; p];
    let mut diff = 0i64;
    for _ in 0..n_mc {
        for u in uniforms.iter_mut() {
            *u = rng.random();
        }
        for &v in &order {
            if v == x {
                hi[v] = 1;
                lo[v] = 0;
            } else {
                hi[v] = spec.draw(v, &hi, uniforms[v]);
                lo[v] = spec.draw(v, &lo, uniforms[v]);
            }
        }
        diff += i64::from(hi[y]) - i64::from(lo[y]);
    }
    diff as f64 / n_mc.max(1) as f64
}
