//! Conditional independence tests behind one interface, with per-order
//! counting of every test performed.

mod chi_square;
mod counter;
mod dataset;
mod fisher_z;
mod memo;
mod oracle;

pub use chi_square::ChiSquareTest;
pub use counter::{TestCounter, TestCounts};
pub use dataset::{DataKind, Dataset};
pub use fisher_z::FisherZTest;
pub use memo::MemoTester;
pub use oracle::OracleTester;

use crate::graph::GraphError;

/// Significance level used when none is given.
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CiError {
    #[error("invalid CI query: {0}")]
    InvalidQuery(String),
    #[error("covariance submatrix is singular")]
    SingularCovariance,
    #[error("{n} samples are too few for a conditioning set of size {order}")]
    InsufficientSamples { n: usize, order: usize },
    #[error("chi-square test needs categorical data")]
    NotCategorical,
    #[error("Fisher-Z test needs continuous data")]
    NotContinuous,
    #[error("significance level {0} outside (0, 1)")]
    InvalidAlpha(f64),
    #[error("data error: {0}")]
    Data(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Answers "is `x` independent of `y` given `s`?".
///
/// Implementors provide [`CiTester::evaluate`]; callers use
/// [`CiTester::independent`], which validates the query and counts it once at
/// order `s.len()`.
pub trait CiTester: Send + Sync {
    fn n_vertices(&self) -> usize;

    fn counter(&self) -> &TestCounter;

    /// Raw verdict for a validated query; `true` means independent.
    fn evaluate(&self, x: usize, y: usize, s: &[usize]) -> Result<bool, CiError>;

    fn independent(&self, x: usize, y: usize, s: &[usize]) -> Result<bool, CiError> {
        validate_query(self.n_vertices(), x, y, s)?;
        self.counter().record(s.len());
        self.evaluate(x, y, s)
    }
}

impl<T: CiTester + ?Sized> CiTester for &T {
    fn n_vertices(&self) -> usize {
        (**self).n_vertices()
    }
    fn counter(&self) -> &TestCounter {
        (**self).counter()
    }
    fn evaluate(&self, x: usize, y: usize, s: &[usize]) -> Result<bool, CiError> {
        (**self).evaluate(x, y, s)
    }
    fn independent(&self, x: usize, y: usize, s: &[usize]) -> Result<bool, CiError> {
        (**self).independent(x, y, s)
    }
}

pub(crate) fn validate_query(n: usize, x: usize, y: usize, s: &[usize]) -> Result<(), CiError> {
    if let Some(&v) = [x, y].iter().chain(s).find(|&&v| v >= n) {
        return Err(GraphError::VertexOutOfRange { vertex: v, n }.into());
    }
    if x == y {
        return Err(CiError::InvalidQuery(format!("x = y = {x}")));
    }
    if s.contains(&x) || s.contains(&y) {
        return Err(CiError::InvalidQuery(format!(
            "conditioning set contains {x} or {y}"
        )));
    }
    for (i, v) in s.iter().enumerate() {
        if s[i + 1..].contains(v) {
            return Err(CiError::InvalidQuery(format!("{v} repeated in conditioning set")));
        }
    }
    Ok(())
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), CiError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(CiError::InvalidAlpha(alpha))
    }
}
