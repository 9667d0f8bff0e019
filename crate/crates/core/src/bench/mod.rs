//! Benchmark harness: sweeps over generated ground truths, runs discovery
//! and estimation, and writes per-run metrics plus trimmed summaries.

mod config;
mod metrics;
mod run;

use thiserror::Error;

pub use config::{Algorithm, ExperimentConfig, GridPoint, TesterKind};
pub use metrics::{read_rows, summarize, trimmed_mean, write_csv, MetricsRow, SummaryRow, STATUS_ERROR, STATUS_OK};
pub use run::{discover, resolve_names, run_experiment, summary_path, write_outputs, BINARY_TRUTH_DRAWS};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Discovery(#[from] crate::discovery::DiscoveryError),
    #[error(transparent)]
    Adjustment(#[from] crate::adjustment::AdjustmentError),
    #[error(transparent)]
    Synthetic(#[from] crate::synthetic::SyntheticError),
    #[error(transparent)]
    Ci(#[from] crate::ci::CiError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}
