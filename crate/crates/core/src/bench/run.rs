use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::adjustment::{estimate_all_pairs, intervention_distance, true_total_effect};
use crate::ci::{ChiSquareTest, CiTester, Dataset, FisherZTest, OracleTester};
use crate::discovery::{pc, snap_inf, snap_k, snap_prefilter_then, DiscoveryResult, GlobalAlgorithm};
use crate::graph::{cpdag_of, parse_edge_list, Dag, MixedGraph, VertexSet};
use crate::synthetic::{
    binary_interventional_effect, random_cpt, random_dag, random_sem, sample_binary, sample_linear_gaussian,
    sample_targets, stream_rng, GenConfig, Stream,
};

use super::metrics::{summarize, write_csv, MetricsRow, STATUS_ERROR, STATUS_OK};
use super::{Algorithm, BenchError, ExperimentConfig, GridPoint, TesterKind};

/// Monte Carlo draws behind each binary ground-truth effect.
pub const BINARY_TRUTH_DRAWS: usize = 20_000;

struct Fixed {
    dag: Dag,
    targets: Option<VertexSet>,
}

fn load_fixed(cfg: &ExperimentConfig) -> Result<Option<Fixed>, BenchError> {
    let Some(path) = &cfg.graph_file else {
        return Ok(None);
    };
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::Io(format!("{}: {e}", path.display())))?;
    let el = parse_edge_list(&text).map_err(|e| BenchError::Config(e.to_string()))?;
    let dag = el.to_dag().map_err(|e| BenchError::Config(e.to_string()))?;
    let targets = match &cfg.targets {
        Some(names) => Some(resolve_names(&el.names, names)?),
        None => None,
    };
    Ok(Some(Fixed { dag, targets }))
}

/// Indices of `wanted` within `names`.
pub fn resolve_names(names: &[String], wanted: &[String]) -> Result<VertexSet, BenchError> {
    wanted
        .iter()
        .map(|w| {
            names
                .iter()
                .position(|n| n == w)
                .ok_or_else(|| BenchError::Config(format!("unknown vertex {w:?}")))
        })
        .collect()
}

/// Runs every grid point × replicate × algorithm. Rows come back in grid,
/// replicate, algorithm order regardless of scheduling. A failing replicate
/// yields error rows and never aborts the sweep.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<MetricsRow>, BenchError> {
    cfg.validate()?;
    let fixed = load_fixed(cfg)?;
    if let (None, Some(_)) = (&fixed, &cfg.targets) {
        return Err(BenchError::Config("fixed targets need graph_file".into()));
    }
    let grid = cfg.grid(fixed.as_ref().map(|f| f.dag.n_vertices()));
    let jobs: Vec<(GridPoint, usize)> = grid
        .iter()
        .flat_map(|gp| (0..cfg.replicates).map(move |r| (*gp, r)))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| BenchError::Io(e.to_string()))?;
    let rows: Vec<Vec<MetricsRow>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(gp, r)| run_replicate(cfg, fixed.as_ref(), gp, r))
            .collect()
    });
    Ok(rows.into_iter().flatten().collect())
}

fn template(cfg: &ExperimentConfig, gp: GridPoint, replicate: usize, algorithm: Algorithm) -> MetricsRow {
    MetricsRow {
        grid: gp.index,
        replicate,
        algorithm: algorithm.to_string(),
        tester: cfg.tester.to_string(),
        n_vertices: gp.n_vertices,
        expected_degree: gp.expected_degree,
        n_targets: gp.n_targets,
        n_samples: gp.n_samples,
        seed: cfg.seed,
        status: STATUS_ERROR.into(),
        error: String::new(),
        ci_tests_total: None,
        ci_tests_by_order: String::new(),
        wall_ms: None,
        shd_on_possan: None,
        intervention_distance: None,
        n_remaining: None,
        n_true_possan: None,
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}

fn run_replicate(cfg: &ExperimentConfig, fixed: Option<&Fixed>, gp: GridPoint, rep: usize) -> Vec<MetricsRow> {
    let setup = catch_unwind(AssertUnwindSafe(|| Replicate::build(cfg, fixed, gp, rep)));
    let replicate = match setup {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => return error_rows(cfg, gp, rep, &e.to_string()),
        Err(p) => return error_rows(cfg, gp, rep, &format!("panic: {}", panic_message(p))),
    };
    cfg.algorithms
        .iter()
        .map(|&alg| {
            let mut row = template(cfg, gp, rep, alg);
            match catch_unwind(AssertUnwindSafe(|| replicate.evaluate(cfg, alg, &mut row))) {
                Ok(Ok(())) => row.status = STATUS_OK.into(),
                Ok(Err(e)) => row = failed(template(cfg, gp, rep, alg), &e.to_string()),
                Err(p) => row = failed(template(cfg, gp, rep, alg), &format!("panic: {}", panic_message(p))),
            }
            row
        })
        .collect()
}

fn failed(mut row: MetricsRow, message: &str) -> MetricsRow {
    row.status = STATUS_ERROR.into();
    row.error = message.to_string();
    row
}

fn error_rows(cfg: &ExperimentConfig, gp: GridPoint, rep: usize, message: &str) -> Vec<MetricsRow> {
    cfg.algorithms
        .iter()
        .map(|&a| failed(template(cfg, gp, rep, a), message))
        .collect()
}

/// Ground truth and data shared by all algorithms of one replicate.
struct Replicate {
    dag: Dag,
    cpdag: MixedGraph,
    targets: VertexSet,
    true_possan: VertexSet,
    discovery: Option<Dataset>,
    estimation: Option<Dataset>,
    truth: BTreeMap<(usize, usize), f64>,
}

impl Replicate {
    fn build(cfg: &ExperimentConfig, fixed: Option<&Fixed>, gp: GridPoint, rep: usize) -> Result<Self, BenchError> {
        let rng = |s| stream_rng(cfg.seed, gp.index as u64, rep as u64, s);
        let dag = match fixed {
            Some(f) => f.dag.clone(),
            None => {
                let gen = GenConfig {
                    n_vertices: gp.n_vertices,
                    expected_degree: gp.expected_degree.unwrap_or(0.0),
                    max_degree: cfg.max_degree,
                };
                random_dag(&gen, &mut rng(Stream::Graph))?
            }
        };
        let targets = match fixed.and_then(|f| f.targets.clone()) {
            Some(t) => t,
            None => sample_targets(&dag, gp.n_targets, cfg.target_mode, &mut rng(Stream::Targets))?,
        };
        let cpdag = cpdag_of(&dag);
        let true_possan = cpdag.possible_ancestors(&targets);

        let mut out = Self {
            dag,
            cpdag,
            targets,
            true_possan,
            discovery: None,
            estimation: None,
            truth: BTreeMap::new(),
        };
        if gp.n_samples == 0 {
            return Ok(out);
        }
        let pairs: Vec<(usize, usize)> = out
            .targets
            .iter()
            .flat_map(|x| out.targets.iter().filter(move |&y| y != x).map(move |y| (x, y)))
            .collect();
        let data = if cfg.tester == TesterKind::ChiSquare {
            let spec = random_cpt(&out.dag, &mut rng(Stream::Parameters));
            let mut truth_rng = rng(Stream::Truth);
            for &(x, y) in &pairs {
                let e = binary_interventional_effect(&spec, x, y, BINARY_TRUTH_DRAWS, &mut truth_rng);
                out.truth.insert((x, y), e);
            }
            sample_binary(&spec, gp.n_samples, &mut rng(Stream::Data))
        } else {
            let spec = random_sem(&out.dag, &mut rng(Stream::Parameters));
            for &(x, y) in &pairs {
                out.truth.insert((x, y), true_total_effect(&out.dag, |a, b| spec.weight(a, b), x, y));
            }
            sample_linear_gaussian(&spec, gp.n_samples, &mut rng(Stream::Data))
        };
        let (disc, est) = data.split_half(&mut rng(Stream::Split));
        out.discovery = Some(disc);
        out.estimation = Some(est);
        Ok(out)
    }

    fn tester(&self, cfg: &ExperimentConfig) -> Result<Box<dyn CiTester>, BenchError> {
        let data = || self.discovery.as_ref().ok_or_else(|| BenchError::Config("no data sampled".into()));
        Ok(match cfg.tester {
            TesterKind::Oracle => Box::new(OracleTester::new(self.dag.clone())),
            TesterKind::FisherZ => Box::new(FisherZTest::new(data()?, cfg.alpha)?),
            TesterKind::ChiSquare => Box::new(ChiSquareTest::new(data()?, cfg.alpha)?),
        })
    }

    fn evaluate(&self, cfg: &ExperimentConfig, alg: Algorithm, row: &mut MetricsRow) -> Result<(), BenchError> {
        let tester = self.tester(cfg)?;
        let result = discover(alg, &self.targets, tester.as_ref())?;
        let full = result.full_graph();
        let (learned, _) = full.induced_subgraph(&self.true_possan)?;
        let (truth, _) = self.cpdag.induced_subgraph(&self.true_possan)?;

        row.ci_tests_total = Some(result.tests.total());
        row.ci_tests_by_order = result.tests.to_compact();
        row.wall_ms = Some(result.wall_time.as_secs_f64() * 1e3);
        row.shd_on_possan = Some(learned.shd(&truth)?);
        row.n_remaining = Some(result.remaining.len());
        row.n_true_possan = Some(self.true_possan.len());
        if let Some(est) = &self.estimation {
            if self.targets.len() >= 2 {
                let estimates = estimate_all_pairs(est, &full, &self.targets)?;
                row.intervention_distance = Some(intervention_distance(&self.truth, &estimates, &self.targets)?);
            }
        }
        Ok(())
    }
}

/// Runs `alg` over all of the tester's vertices.
pub fn discover(alg: Algorithm, targets: &VertexSet, tester: &dyn CiTester) -> Result<DiscoveryResult, BenchError> {
    let all = VertexSet::full(tester.n_vertices());
    Ok(match alg {
        Algorithm::Pc => pc(&all, tester)?,
        Algorithm::SnapInf => snap_inf(&all, targets, tester)?,
        Algorithm::SnapK(k) => snap_k(&all, targets, k, tester)?,
        Algorithm::SnapKPc(k) => snap_prefilter_then(GlobalAlgorithm::Pc, &all, targets, k, tester)?,
    })
}

/// Path of the trimmed summary written next to `results`.
pub fn summary_path(results: &Path) -> PathBuf {
    let stem = results.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    results.with_file_name(format!("{stem}.summary.csv"))
}

/// Writes the raw rows to `path` and the trimmed summary beside it.
pub fn write_outputs(rows: &[MetricsRow], trim: f64, path: &Path) -> Result<PathBuf, BenchError> {
    let io = |e: std::io::Error| BenchError::Io(format!("{}: {e}", path.display()));
    write_csv(std::fs::File::create(path).map_err(io)?, rows)?;
    let summary = summary_path(path);
    write_csv(std::fs::File::create(&summary).map_err(io)?, &summarize(rows, trim))?;
    Ok(summary)
}
