use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;

use snap_core::adjustment::{estimate_all_pairs, write_effect_report};
use snap_core::bench::{discover, resolve_names, run_experiment, write_outputs, Algorithm, ExperimentConfig, TesterKind};
use snap_core::ci::{ChiSquareTest, CiTester, Dataset, FisherZTest, OracleTester};
use snap_core::graph::{d_separated, parse_edge_list, EdgeList};
use snap_core::synthetic::{
    expected_possible_ancestors, random_cpt, random_dag, random_sem, sample_binary, sample_linear_gaussian,
    sample_targets, stream_rng, GenConfig, Stream, TargetMode,
};
use snap_core::VertexSet;

#[derive(Parser)]
#[command(name = "snap", version, about = "Targeted causal discovery and effect estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random DAG, its parameters, a dataset and a target set.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Learn a graph from a true DAG (oracle) or from data.
    Discover {
        /// True DAG for the d-separation oracle.
        #[arg(long, conflicts_with = "data")]
        graph: Option<PathBuf>,
        #[arg(long)]
        data: Option<PathBuf>,
        /// pc, snap-inf, snap-k or snap-k-pc.
        #[arg(long, default_value = "snap-inf")]
        algo: String,
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated target names.
        #[arg(long, value_delimiter = ',')]
        targets: Vec<String>,
        /// oracle, fisher-z or chi-sq; defaults to oracle with --graph and fisher-z with --data.
        #[arg(long)]
        tester: Option<String>,
        #[arg(long, default_value_t = snap_core::ci::DEFAULT_ALPHA)]
        alpha: f64,
        /// Edge-list output; a JSON metrics sidecar is written beside it. Stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate pairwise effects between targets by covariate adjustment.
    Estimate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<String>,
        /// Report CSV; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark sweep.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Results CSV; falls back to the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print whether X and Y are d-separated given a set in a DAG.
    Dsep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, value_delimiter = ',')]
        given: Vec<String>,
    },
    /// Print the expected number of possible ancestors of a random target set.
    ExpectedAncestors {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: u64,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(m: impl std::fmt::Display) -> Failure {
    Failure::Usage(m.to_string())
}

fn runtime(m: impl std::fmt::Display) -> Failure {
    Failure::Runtime(m.to_string())
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = e.print();
            } else {
                let msg = e.to_string();
                eprintln!("{}", msg.lines().next().unwrap_or("usage error"));
            }
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Generate { config, out, seed } => generate(&config, &out, seed),
        Command::Discover {
            graph,
            data,
            algo,
            k,
            targets,
            tester,
            alpha,
            out,
        } => discover_cmd(graph, data, &algo, k, &targets, tester.as_deref(), alpha, out),
        Command::Estimate {
            graph,
            data,
            targets,
            out,
        } => estimate(&graph, &data, &targets, out),
        Command::Bench {
            config,
            out,
            workers,
            seed,
        } => bench(&config, out, workers, seed),
        Command::Dsep { graph, x, y, given } => dsep(&graph, &x, &y, &given),
        Command::ExpectedAncestors { n, t } => expected(n, t),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &[u8]) -> Outcome {
    fs::write(path, contents).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, contents: &[u8]) -> Outcome {
    match out {
        Some(p) => write(p, contents),
        None => std::io::stdout().write_all(contents).map_err(runtime),
    }
}

fn load_graph(path: &Path) -> Result<EdgeList, Failure> {
    parse_edge_list(&read(path)?).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn load_data(path: &Path, categorical: bool) -> Result<Dataset, Failure> {
    let file = fs::File::open(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    Dataset::read_csv(file, categorical).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn names_to_set(names: &[String], wanted: &[String]) -> Result<VertexSet, Failure> {
    resolve_names(names, wanted).map_err(usage)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenerateConfig {
    n_vertices: usize,
    expected_degree: f64,
    #[serde(default = "default_max_degree")]
    max_degree: usize,
    #[serde(default)]
    n_targets: usize,
    #[serde(default = "default_target_mode")]
    target_mode: TargetMode,
    #[serde(default)]
    n_samples: usize,
    /// `gaussian` or `binary`.
    #[serde(default = "default_kind")]
    data: String,
    #[serde(default)]
    seed: u64,
}

fn default_max_degree() -> usize {
    10
}
fn default_target_mode() -> TargetMode {
    TargetMode::Random
}
fn default_kind() -> String {
    "gaussian".into()
}

/// Writes `graph.edges`, `spec.json`, `targets.txt` and, with samples
/// requested, `data.csv` into `out`.
fn generate(config: &Path, out: &Path, seed: Option<u64>) -> Outcome {
    let cfg: GenerateConfig = serde_json::from_str(&read(config)?).map_err(|e| usage(format!("{}: {e}", config.display())))?;
    let seed = seed.unwrap_or(cfg.seed);
    let binary = match cfg.data.as_str() {
        "gaussian" => false,
        "binary" => true,
        other => return Err(usage(format!("unknown data kind {other:?}"))),
    };
    let gen = GenConfig {
        n_vertices: cfg.n_vertices,
        expected_degree: cfg.expected_degree,
        max_degree: cfg.max_degree,
    };
    let rng = |s| stream_rng(seed, 0, 0, s);
    let dag = random_dag(&gen, &mut rng(Stream::Graph)).map_err(usage)?;
    let names = dag.names();
    fs::create_dir_all(out).map_err(|e| runtime(format!("{}: {e}", out.display())))?;
    write(&out.join("graph.edges"), EdgeList::from_dag(&dag).to_text().as_bytes())?;

    let targets = if cfg.n_targets > 0 {
        sample_targets(&dag, cfg.n_targets, cfg.target_mode, &mut rng(Stream::Targets)).map_err(runtime)?
    } else {
        VertexSet::new()
    };
    let target_names: Vec<&str> = targets.iter().map(|v| names[v].as_str()).collect();
    write(&out.join("targets.txt"), format!("{}\n", target_names.join(",")).as_bytes())?;

    let data = if binary {
        let spec = random_cpt(&dag, &mut rng(Stream::Parameters));
        write(&out.join("spec.json"), spec.to_json().as_bytes())?;
        (cfg.n_samples > 0).then(|| sample_binary(&spec, cfg.n_samples, &mut rng(Stream::Data)))
    } else {
        let spec = random_sem(&dag, &mut rng(Stream::Parameters));
        write(&out.join("spec.json"), spec.to_json().as_bytes())?;
        (cfg.n_samples > 0).then(|| sample_linear_gaussian(&spec, cfg.n_samples, &mut rng(Stream::Data)))
    };
    if let Some(data) = data {
        let path = out.join("data.csv");
        let file = fs::File::create(&path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
        data.write_csv(file).map_err(runtime)?;
    }
    Ok(())
}

fn parse_algorithm(algo: &str, k: Option<usize>) -> Result<Algorithm, Failure> {
    let need_k = || k.ok_or_else(|| usage(format!("--algo {algo} needs --k")));
    match algo {
        "pc" => Ok(Algorithm::Pc),
        "snap-inf" => Ok(Algorithm::SnapInf),
        "snap-k" => Ok(Algorithm::SnapK(need_k()?)),
        "snap-k-pc" => Ok(Algorithm::SnapKPc(need_k()?)),
        other => other.parse().map_err(usage),
    }
}

#[allow(clippy::too_many_arguments)]
fn discover_cmd(
    graph: Option<PathBuf>,
    data: Option<PathBuf>,
    algo: &str,
    k: Option<usize>,
    targets: &[String],
    tester: Option<&str>,
    alpha: f64,
    out: Option<PathBuf>,
) -> Outcome {
    let algorithm = parse_algorithm(algo, k)?;
    let kind: TesterKind = match tester {
        Some(t) => t.parse().map_err(usage)?,
        None if graph.is_some() => TesterKind::Oracle,
        None => TesterKind::FisherZ,
    };
    if algorithm != Algorithm::Pc && targets.is_empty() {
        return Err(usage("--targets is required for SNAP variants"));
    }
    let (names, tester): (Vec<String>, Box<dyn CiTester>) = match (kind, &graph, &data) {
        (TesterKind::Oracle, Some(g), None) => {
            let el = load_graph(g)?;
            let dag = el.to_dag().map_err(runtime)?;
            (el.names, Box::new(OracleTester::new(dag)))
        }
        (TesterKind::FisherZ, None, Some(d)) => {
            let ds = load_data(d, false)?;
            let t = FisherZTest::new(&ds, alpha).map_err(usage)?;
            (ds.names().to_vec(), Box::new(t))
        }
        (TesterKind::ChiSquare, None, Some(d)) => {
            let ds = load_data(d, true)?;
            let t = ChiSquareTest::new(&ds, alpha).map_err(usage)?;
            (ds.names().to_vec(), Box::new(t))
        }
        (TesterKind::Oracle, _, _) => return Err(usage("the oracle tester needs --graph")),
        _ => return Err(usage("statistical testers need --data")),
    };
    let target_set = names_to_set(&names, targets)?;
    let result = discover(algorithm, &target_set, tester.as_ref()).map_err(runtime)?;
    let edges = result.to_edge_list(&names);
    match out {
        Some(path) => {
            write(&path, edges.as_bytes())?;
            write(&path.with_extension("json"), result.sidecar_json(&names).as_bytes())
        }
        None => emit(None, edges.as_bytes()),
    }
}

fn estimate(graph: &Path, data: &Path, targets: &[String], out: Option<PathBuf>) -> Outcome {
    let el = load_graph(graph)?;
    let raw = load_data(data, false)?;
    let ds = raw.with_column_order(&el.names).map_err(usage)?;
    let target_set = names_to_set(&el.names, targets)?;
    let estimates = estimate_all_pairs(&ds, &el.graph, &target_set).map_err(runtime)?;
    let mut buf = Vec::new();
    write_effect_report(&mut buf, &el.names, &estimates).map_err(runtime)?;
    emit(out.as_deref(), &buf)
}

fn bench(config: &Path, out: Option<PathBuf>, workers: Option<usize>, seed: Option<u64>) -> Outcome {
    let mut cfg = ExperimentConfig::load(config).map_err(usage)?;
    if workers.is_some() {
        cfg.workers = workers;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let out = out
        .or_else(|| cfg.output.clone())
        .ok_or_else(|| usage("no output path: pass --out or set `output`"))?;
    let rows = run_experiment(&cfg).map_err(runtime)?;
    write_outputs(&rows, cfg.trim, &out).map_err(runtime)?;
    Ok(())
}

fn dsep(graph: &Path, x: &str, y: &str, given: &[String]) -> Outcome {
    let el = load_graph(graph)?;
    let dag = el.to_dag().map_err(runtime)?;
    let one = |name: &str| el.index_of(name).ok_or_else(|| usage(format!("unknown vertex {name:?}")));
    let (xi, yi) = (one(x)?, one(y)?);
    let z = names_to_set(&el.names, given)?;
    let sep = d_separated(&dag, xi, yi, &z).map_err(usage)?;
    println!("{sep}");
    Ok(())
}

fn expected(n: u64, t: u64) -> Outcome {
    if t == 0 || t > n {
        return Err(usage("need 1 <= t <= n"));
    }
    let v = format!("{:.6}", expected_possible_ancestors(n, t));
    println!("{}", v.trim_end_matches('0').trim_end_matches('.'));
    Ok(())
}
