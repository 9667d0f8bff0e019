use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{check_alpha, CiError, CiTester, DataKind, Dataset, TestCounter};

// relative tolerance on the pivoted-QR diagonal below which the covariance
// submatrix is treated as rank deficient
const RANK_TOL: f64 = 1e-10;

/// Fisher-Z test of vanishing partial correlation for continuous data.
///
/// The sample covariance is computed once at construction; each query
/// inverts only the `(|s| + 2)`-dimensional submatrix it needs.
#[derive(Debug)]
pub struct FisherZTest {
    cov: DMatrix<f64>,
    n_samples: usize,
    critical: f64,
    counter: TestCounter,
}

impl FisherZTest {
    pub fn new(data: &Dataset, alpha: f64) -> Result<Self, CiError> {
        check_alpha(alpha)?;
        if *data.kind() != DataKind::Continuous {
            return Err(CiError::NotContinuous);
        }
        let p = data.n_vars();
        let n = data.n_samples();
        let centered: Vec<Vec<f64>> = (0..p)
            .map(|j| {
                let col = data.column(j);
                let mean = col.iter().sum::<f64>() / n.max(1) as f64;
                col.iter().map(|v| v - mean).collect()
            })
            .collect();
        let denom = (n.max(2) - 1) as f64;
        let mut cov = DMatrix::zeros(p, p);
        for a in 0..p {
            for b in a..p {
                let c = centered[a]
                    .iter()
                    .zip(&centered[b])
                    .map(|(u, v)| u * v)
                    .sum::<f64>()
                    / denom;
                cov[(a, b)] = c;
                cov[(b, a)] = c;
            }
        }
        let critical = Normal::standard().inverse_cdf(1.0 - alpha / 2.0);
        Ok(Self {
            cov,
            n_samples: n,
            critical,
            counter: TestCounter::new(),
        })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// Partial correlation of `x` and `y` given `s`, from the inverse of the
    /// covariance submatrix over `{x, y} ∪ s`.
    pub fn partial_correlation(&self, x: usize, y: usize, s: &[usize]) -> Result<f64, CiError> {
        let idx: Vec<usize> = [x, y].into_iter().chain(s.iter().copied()).collect();
        let k = idx.len();
        let sub = DMatrix::from_fn(k, k, |i, j| self.cov[(idx[i], idx[j])]);
        let qr = sub.col_piv_qr();
        let r = qr.r();
        let diag: Vec<f64> = (0..k).map(|i| r[(i, i)].abs()).collect();
        let largest = diag.iter().cloned().fold(0.0, f64::max);
        if largest == 0.0 || diag.iter().any(|&d| d <= RANK_TOL * largest) {
            return Err(CiError::SingularCovariance);
        }
        let prec = qr.try_inverse().ok_or(CiError::SingularCovariance)?;
        let denom = (prec[(0, 0)] * prec[(1, 1)]).sqrt();
        if !denom.is_finite() || denom <= 0.0 {
            return Err(CiError::SingularCovariance);
        }
        Ok((-prec[(0, 1)] / denom).clamp(-1.0, 1.0))
    }

    /// The Fisher-Z statistic `atanh(r) * sqrt(n - |s| - 3)`.
    pub fn statistic(&self, x: usize, y: usize, s: &[usize]) -> Result<f64, CiError> {
        let needed = s.len() + 3;
        if self.n_samples <= needed {
            return Err(CiError::InsufficientSamples {
                n: self.n_samples,
                order: s.len(),
            });
        }
        let r = self.partial_correlation(x, y, s)?;
        let r = r.clamp(-1.0 + f64::EPSILON, 1.0 - f64::EPSILON);
        Ok(0.5 * ((1.0 + r) / (1.0 - r)).ln() * ((self.n_samples - needed) as f64).sqrt())
    }
}

impl CiTester for FisherZTest {
    fn n_vertices(&self) -> usize {
        self.cov.nrows()
    }

    fn counter(&self) -> &TestCounter {
        &self.counter
    }

    fn evaluate(&self, x: usize, y: usize, s: &[usize]) -> Result<bool, CiError> {
        Ok(self.statistic(x, y, s)?.abs() <= self.critical)
    }
}
