mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snap_core::adjustment::is_amenable;
use snap_core::graph::cpdag_of;
use snap_core::synthetic::{
    binary_interventional_effect, expected_possible_ancestors, random_cpt, random_dag, random_sem, sample_binary,
    sample_linear_gaussian, sample_targets, stream_rng, CptSpec, GenConfig, Stream, TargetMode,
};
use snap_core::{Dag, VertexSet};

/// Mean of the largest element over all `t`-subsets of `1..=n`.
fn mean_max_by_enumeration(n: usize, t: usize) -> f64 {
    let items: Vec<usize> = (1..=n).collect();
    let (mut sum, mut count) = (0usize, 0usize);
    for_each_combination(&items, t, &mut |s| {
        sum += *s.last().unwrap();
        count += 1;
    });
    sum as f64 / count as f64
}

/// Exact `P(Y = 1 | do(X = value))` by summing over all assignments.
fn exact_do(spec: &CptSpec, dag: &Dag, x: usize, y: usize, value: u8) -> f64 {
    let p = dag.n_vertices();
    let mut total = 0.0;
    for mask in 0u32..(1 << p) {
        let vals: Vec<u8> = (0..p).map(|v| (mask >> v & 1) as u8).collect();
        if vals[x] != value || vals[y] != 1 {
            continue;
        }
        let mut prob = 1.0;
        for v in (0..p).filter(|&v| v != x) {
            let c = dag.parents(v).iter().enumerate().fold(0, |c, (i, &q)| c | (vals[q] as usize) << i);
            let p1 = spec.table(v)[c];
            prob *= if vals[v] == 1 { p1 } else { 1.0 - p1 };
        }
        total += prob;
    }
    if y == x {
        f64::from(value)
    } else {
        total
    }
}

#[test]
fn expected_ancestors_matches_enumeration() {
    for n in 1..=12 {
        for t in 1..=n.min(4) {
            let exact = mean_max_by_enumeration(n, t);
            let ours = expected_possible_ancestors(n as u64, t as u64);
            assert!((exact - ours).abs() < 1e-12, "n={n} t={t}: {exact} vs {ours}");
        }
    }
}

#[test]
fn binary_effects_match_exact_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let dag = random_small_dag(&mut rng, 5, 2.5);
    let spec = random_cpt(&dag, &mut rng);
    for x in 0..5 {
        for y in (0..5).filter(|&y| y != x) {
            let exact = exact_do(&spec, &dag, x, y, 1) - exact_do(&spec, &dag, x, y, 0);
            let mc = binary_interventional_effect(&spec, x, y, 200_000, &mut rng);
            assert!((exact - mc).abs() < 0.01, "{x}->{y}: {exact} vs {mc}");
        }
    }
}

#[test]
fn binary_marginals_match_exact_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let dag = random_small_dag(&mut rng, 5, 2.0);
    let spec = random_cpt(&dag, &mut rng);
    let data = sample_binary(&spec, 100_000, &mut rng);
    for v in 0..5 {
        let freq = data.column(v).iter().sum::<f64>() / 100_000.0;
        let exact = marginal(&spec, &dag, v);
        assert!((freq - exact).abs() < 0.01, "vertex {v}: {freq} vs {exact}");
    }
}

fn marginal(spec: &CptSpec, dag: &Dag, v: usize) -> f64 {
    let p = dag.n_vertices();
    (0u32..(1 << p))
        .filter(|m| m >> v & 1 == 1)
        .map(|m| {
            (0..p)
                .map(|u| {
                    let c = dag.parents(u).iter().enumerate().fold(0, |c, (i, &q)| c | ((m >> q & 1) as usize) << i);
                    let p1 = spec.table(u)[c];
                    if m >> u & 1 == 1 { p1 } else { 1.0 - p1 }
                })
                .product::<f64>()
        })
        .sum()
}

#[test]
fn gaussian_samples_have_model_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let dag = random_small_dag(&mut rng, 4, 2.0);
    let spec = random_sem(&dag, &mut rng);
    let n = 200_000;
    let data = sample_linear_gaussian(&spec, n, &mut rng);
    for (&(a, b), &w) in spec.weights() {
        // Cov(a, b) - w Var(a) equals the covariance through other paths,
        // which is zero when b has a as its only parent.
        if dag.parents(b).len() == 1 {
            let ca = data.column(a);
            let cb = data.column(b);
            let ma = ca.iter().sum::<f64>() / n as f64;
            let mb = cb.iter().sum::<f64>() / n as f64;
            let cov: f64 = ca.iter().zip(cb).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / n as f64;
            let var: f64 = ca.iter().map(|x| (x - ma).powi(2)).sum::<f64>() / n as f64;
            assert!((cov / var - w).abs() < 0.03, "{a}->{b}: {} vs {w}", cov / var);
        }
    }
}

#[test]
fn streams_reproduce_datasets() {
    let gen = GenConfig { n_vertices: 20, expected_degree: 2.0, max_degree: 10 };
    let make = || {
        let dag = random_dag(&gen, &mut stream_rng(5, 1, 2, Stream::Graph)).unwrap();
        let spec = random_sem(&dag, &mut stream_rng(5, 1, 2, Stream::Parameters));
        sample_linear_gaussian(&spec, 50, &mut stream_rng(5, 1, 2, Stream::Data))
    };
    let (a, b) = (make(), make());
    for v in 0..20 {
        assert_eq!(a.column(v), b.column(v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn identifiable_targets_are_identifiable(seed in any::<u64>(), t in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gen = GenConfig { n_vertices: 15, expected_degree: 2.0, max_degree: 10 };
        let dag = random_dag(&gen, &mut rng).unwrap();
        let Ok(targets) = sample_targets(&dag, t, TargetMode::Identifiable, &mut rng) else {
            return Ok(());
        };
        let g = cpdag_of(&dag);
        for x in targets.iter() {
            let mut related = false;
            for y in targets.iter().filter(|&y| y != x) {
                prop_assert!(is_amenable(&g, x, y).unwrap());
                let pair: VertexSet = [y].into();
                related |= dag.ancestors(&pair).contains(x) || dag.descendants(&pair).contains(x);
            }
            prop_assert!(related);
        }
    }

    #[test]
    fn degree_cap_holds(seed in any::<u64>(), d in 0.5f64..4.0) {
        let gen = GenConfig { n_vertices: 40, expected_degree: d, max_degree: 4 };
        let dag = random_dag(&gen, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        for v in 0..40 {
            prop_assert!(dag.parents(v).len() + dag.children(v).len() <= 4);
        }
    }
}
