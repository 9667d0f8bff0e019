use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::synthetic::TargetMode;

use super::BenchError;

/// Discovery algorithm under benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Algorithm {
    Pc,
    SnapInf,
    SnapK(usize),
    /// SNAP(k) prefilter followed by PC on the remaining vertices.
    SnapKPc(usize),
}

impl FromStr for Algorithm {
    type Err = BenchError;

    /// Accepts `pc`, `snap-inf`, `snap-k:K` and `snap-k-pc:K`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BenchError::Config(format!("unknown algorithm {s:?}"));
        let order = |k: &str| k.parse::<usize>().map_err(|_| bad());
        match s {
            "pc" => Ok(Self::Pc),
            "snap-inf" => Ok(Self::SnapInf),
            _ => {
                if let Some(k) = s.strip_prefix("snap-k-pc:") {
                    Ok(Self::SnapKPc(order(k)?))
                } else if let Some(k) = s.strip_prefix("snap-k:") {
                    Ok(Self::SnapK(order(k)?))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl TryFrom<String> for Algorithm {
    type Error = BenchError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Algorithm> for String {
    fn from(a: Algorithm) -> String {
        a.to_string()
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Pc => write!(f, "pc"),
            Self::SnapInf => write!(f, "snap-inf"),
            Self::SnapK(k) => write!(f, "snap-k:{k}"),
            Self::SnapKPc(k) => write!(f, "snap-k-pc:{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TesterKind {
    Oracle,
    FisherZ,
    /// Implies binary data.
    ChiSquare,
}

impl FromStr for TesterKind {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oracle" | "d-sep" => Ok(Self::Oracle),
            "fisher-z" | "fisher_z" => Ok(Self::FisherZ),
            "chi-sq" | "chi_square" | "chi-square" => Ok(Self::ChiSquare),
            _ => Err(BenchError::Config(format!("unknown tester {s:?}"))),
        }
    }
}

impl TryFrom<String> for TesterKind {
    type Error = BenchError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<TesterKind> for String {
    fn from(t: TesterKind) -> String {
        t.to_string()
    }
}

impl fmt::Display for TesterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Oracle => "oracle",
            Self::FisherZ => "fisher-z",
            Self::ChiSquare => "chi-sq",
        })
    }
}

fn default_max_degree() -> usize {
    10
}
fn default_alpha() -> f64 {
    crate::ci::DEFAULT_ALPHA
}
fn default_trim() -> f64 {
    0.05
}
fn default_replicates() -> usize {
    1
}
fn default_target_mode() -> TargetMode {
    TargetMode::Random
}
fn default_n_samples() -> Vec<usize> {
    vec![0]
}

/// One benchmark sweep, read from JSON.
///
/// The grid is the cartesian product of the four list-valued axes. With
/// `graph_file` set, the vertex-count and degree axes are ignored and every
/// replicate uses that graph. `n_samples` counts all generated rows; half go
/// to discovery and half to estimation, and 0 skips data entirely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub n_vertices: Vec<usize>,
    #[serde(default)]
    pub expected_degree: Vec<f64>,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    #[serde(default)]
    pub n_targets: Vec<usize>,
    #[serde(default = "default_n_samples")]
    pub n_samples: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub tester: TesterKind,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_target_mode")]
    pub target_mode: TargetMode,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trim")]
    pub trim: f64,
    /// Worker threads; all available cores when absent.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub graph_file: Option<PathBuf>,
    /// Fixed target names; replaces target sampling.
    #[serde(default)]
    pub targets: Option<Vec<String>>,
}

/// One point of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub n_vertices: usize,
    /// Absent when the graph comes from a file.
    pub expected_degree: Option<f64>,
    pub n_targets: usize,
    pub n_samples: usize,
}

impl ExperimentConfig {
    /// Reads a config file; a relative `graph_file` is resolved against the
    /// config's directory.
    pub fn load(path: &std::path::Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        if let (Some(g), Some(dir)) = (&cfg.graph_file, path.parent()) {
            if g.is_relative() {
                cfg.graph_file = Some(dir.join(g));
            }
        }
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.replicates == 0 {
            return fail("replicates must be at least 1");
        }
        if !(0.0..0.4).contains(&self.trim) {
            return fail("trim must lie in [0, 0.4)");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail("alpha must lie in (0, 1)");
        }
        if self.algorithms.is_empty() {
            return fail("no algorithms selected");
        }
        if self.graph_file.is_none() && (self.n_vertices.is_empty() || self.expected_degree.is_empty()) {
            return fail("n_vertices and expected_degree are required without graph_file");
        }
        if self.targets.is_none() && self.n_targets.is_empty() {
            return fail("n_targets is required without fixed targets");
        }
        if self.n_samples.is_empty() {
            return fail("n_samples must not be empty");
        }
        if self.tester != TesterKind::Oracle && self.n_samples.contains(&0) {
            return fail("statistical testers need n_samples > 0");
        }
        if self.workers == Some(0) {
            return fail("workers must be at least 1");
        }
        Ok(())
    }

    /// Grid points in row-major order over (vertices, degree, targets, samples).
    pub fn grid(&self, fixed_n: Option<usize>) -> Vec<GridPoint> {
        let ns = match fixed_n {
            Some(n) => vec![n],
            None => self.n_vertices.clone(),
        };
        let ds: Vec<Option<f64>> = if fixed_n.is_some() {
            vec![None]
        } else {
            self.expected_degree.iter().map(|&d| Some(d)).collect()
        };
        let ts = match &self.targets {
            Some(t) => vec![t.len()],
            None => self.n_targets.clone(),
        };
        let mut out = Vec::new();
        for &n in &ns {
            for &d in &ds {
                for &t in &ts {
                    for &s in &self.n_samples {
                        out.push(GridPoint {
                            index: out.len(),
                            n_vertices: n,
                            expected_degree: d,
                            n_targets: t,
                            n_samples: s,
                        });
                    }
                }
            }
        }
        out
    }
}
