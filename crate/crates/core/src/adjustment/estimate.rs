use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::{DMatrix, DVector};

use crate::ci::Dataset;
use crate::graph::{Dag, MixedGraph, VertexSet};

use super::sets::{has_possibly_directed_path, is_amenable, optimal_adjustment};
use super::AdjustmentError;

// relative pivot tolerance for declaring the regression design rank deficient
const RANK_TOL: f64 = 1e-10;

// local enumeration visits 2^k parent sets
const MAX_SIBLINGS: usize = 20;

/// Estimated effect of a cause on an outcome: one value when identifiable,
/// otherwise every value compatible with the local structure.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectEstimate {
    pub values: Vec<f64>,
    pub identifiable: bool,
    /// Adjustment set behind each entry of `values`.
    pub adjustment: Vec<VertexSet>,
}

impl EffectEstimate {
    pub fn single(value: f64, adjustment: VertexSet) -> Self {
        Self {
            values: vec![value],
            identifiable: true,
            adjustment: vec![adjustment],
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Coefficient of `x` in the least-squares fit of `y` on `x`, `z` and an
/// intercept.
pub fn estimate_effect_ols(data: &Dataset, x: usize, y: usize, z: &VertexSet) -> Result<f64, AdjustmentError> {
    let p = data.n_vars();
    if x >= p || y >= p || x == y || z.contains(x) || z.contains(y) || z.max().is_some_and(|m| m >= p) {
        return Err(AdjustmentError::InvalidQuery(format!(
            "regression of {y} on {x} given {z:?} over {p} columns"
        )));
    }
    let n = data.n_samples();
    if n <= z.len() + 2 {
        return Err(AdjustmentError::InsufficientSamples { n, covariates: z.len() + 1 });
    }
    let regressors: Vec<usize> = std::iter::once(x).chain(z.iter()).collect();
    let centered = |j: usize| -> Vec<f64> {
        let col = data.column(j);
        let mean = col.iter().sum::<f64>() / n as f64;
        col.iter().map(|v| v - mean).collect()
    };
    let cols: Vec<Vec<f64>> = regressors.iter().map(|&j| centered(j)).collect();
    let ycol = centered(y);
    let k = cols.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
    let gram = DMatrix::from_fn(k, k, |i, j| dot(&cols[i], &cols[j]));
    let rhs = DVector::from_fn(k, |i, _| dot(&cols[i], &ycol));

    let qr = gram.col_piv_qr();
    let r = qr.r();
    let diag: Vec<f64> = (0..k).map(|i| r[(i, i)].abs()).collect();
    let largest = diag.iter().cloned().fold(0.0, f64::max);
    if largest == 0.0 || diag.iter().any(|&d| d <= RANK_TOL * largest) {
        return Err(AdjustmentError::SingularDesign);
    }
    let beta = qr.solve(&rhs).ok_or(AdjustmentError::SingularDesign)?;
    Ok(beta[0])
}

/// Effects of `x` on `y` over every locally valid parent set of `x`.
///
/// A subset `S` of the undirected neighbours of `x` is valid when treating
/// `S` as extra parents creates no new unshielded collider at `x`: `S` is a
/// clique and each member is adjacent to every definite parent. A parent set
/// holding `y` yields effect 0. Equal values are reported once.
pub fn possible_effects_local(
    data: &Dataset,
    g: &MixedGraph,
    x: usize,
    y: usize,
) -> Result<EffectEstimate, AdjustmentError> {
    let parents: Vec<usize> = g.parents(x).collect();
    let siblings: Vec<usize> = g.undirected_neighbors(x).collect();
    if siblings.len() > MAX_SIBLINGS {
        return Err(AdjustmentError::InvalidQuery(format!(
            "{} undirected neighbours exceed the enumeration limit {MAX_SIBLINGS}",
            siblings.len()
        )));
    }
    let mut found: Vec<(f64, VertexSet)> = Vec::new();
    for mask in 0u64..(1u64 << siblings.len()) {
        let s: Vec<usize> = (0..siblings.len()).filter(|i| mask >> i & 1 == 1).map(|i| siblings[i]).collect();
        let clique = s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| g.is_adjacent(a, b)));
        let shielded = s.iter().all(|&a| parents.iter().all(|&p| g.is_adjacent(a, p)));
        if !clique || !shielded {
            continue;
        }
        let set: VertexSet = parents.iter().chain(&s).copied().collect();
        let value = if set.contains(y) {
            0.0
        } else {
            estimate_effect_ols(data, x, y, &set)?
        };
        found.push((value, set));
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    found.dedup_by(|a, b| a.0 == b.0);
    Ok(EffectEstimate {
        identifiable: false,
        values: found.iter().map(|f| f.0).collect(),
        adjustment: found.into_iter().map(|f| f.1).collect(),
    })
}

/// Effect of `x` on `y` given a learned graph indexed like `data`.
///
/// No possibly directed path means a known zero effect; an amenable pair is
/// estimated with the optimal adjustment set; anything else falls back to
/// local enumeration.
pub fn estimate_effect(data: &Dataset, g: &MixedGraph, x: usize, y: usize) -> Result<EffectEstimate, AdjustmentError> {
    if !has_possibly_directed_path(g, x, y) {
        return Ok(EffectEstimate::single(0.0, VertexSet::new()));
    }
    if is_amenable(g, x, y)? {
        let z = optimal_adjustment(g, x, y)?;
        let v = estimate_effect_ols(data, x, y, &z)?;
        return Ok(EffectEstimate::single(v, z));
    }
    possible_effects_local(data, g, x, y)
}

/// [`estimate_effect`] for every ordered pair of distinct targets.
pub fn estimate_all_pairs(
    data: &Dataset,
    g: &MixedGraph,
    targets: &VertexSet,
) -> Result<BTreeMap<(usize, usize), EffectEstimate>, AdjustmentError> {
    let mut out = BTreeMap::new();
    for x in targets {
        for y in targets {
            if x != y {
                out.insert((x, y), estimate_effect(data, g, x, y)?);
            }
        }
    }
    Ok(out)
}

/// Total effect of `x` on `y` in a linear SEM: the sum over directed paths of
/// the product of edge weights.
pub fn true_total_effect(dag: &Dag, weight: impl Fn(usize, usize) -> f64, x: usize, y: usize) -> f64 {
    total_effects_from(dag, weight, x)[y]
}

/// Total effects of `x` on every vertex (1 for `x` itself).
pub fn total_effects_from(dag: &Dag, weight: impl Fn(usize, usize) -> f64, x: usize) -> Vec<f64> {
    let mut eff = vec![0.0; dag.n_vertices()];
    eff[x] = 1.0;
    let order = dag.topological_order().expect("Dag is acyclic");
    for v in order {
        if v == x {
            continue;
        }
        eff[v] = dag.parents(v).iter().map(|&p| eff[p] * weight(p, v)).sum();
    }
    eff
}

/// Mean over ordered target pairs of the mean absolute error across each
/// pair's estimate set.
pub fn intervention_distance(
    truth: &BTreeMap<(usize, usize), f64>,
    estimates: &BTreeMap<(usize, usize), EffectEstimate>,
    targets: &VertexSet,
) -> Result<f64, AdjustmentError> {
    if targets.len() < 2 {
        return Err(AdjustmentError::InvalidQuery("fewer than two targets".into()));
    }
    let mut total = 0.0;
    let mut pairs = 0usize;
    for a in targets {
        for b in targets {
            if a == b {
                continue;
            }
            let missing = AdjustmentError::MissingPair { cause: a, outcome: b };
            let t = *truth.get(&(a, b)).ok_or(missing.clone())?;
            let e = estimates.get(&(a, b)).ok_or(missing)?;
            if e.values.is_empty() {
                return Err(AdjustmentError::MissingPair { cause: a, outcome: b });
            }
            total += e.values.iter().map(|v| (t - v).abs()).sum::<f64>() / e.values.len() as f64;
            pairs += 1;
        }
    }
    Ok(total / pairs as f64)
}

/// CSV report with one row per estimated pair.
pub fn write_effect_report<W: Write>(
    writer: W,
    names: &[String],
    estimates: &BTreeMap<(usize, usize), EffectEstimate>,
) -> Result<(), AdjustmentError> {
    let io = |e: csv::Error| AdjustmentError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["cause", "outcome", "identifiable", "n_estimates", "mean_estimate", "adjustment_set"])
        .map_err(io)?;
    for (&(x, y), e) in estimates {
        let sets: Vec<String> = e
            .adjustment
            .iter()
            .map(|s| s.iter().map(|v| names[v].as_str()).collect::<Vec<_>>().join(";"))
            .collect();
        w.write_record([
            names[x].clone(),
            names[y].clone(),
            e.identifiable.to_string(),
            e.values.len().to_string(),
            format!("{}", e.mean()),
            sets.join("|"),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| AdjustmentError::Io(e.to_string()))
}
