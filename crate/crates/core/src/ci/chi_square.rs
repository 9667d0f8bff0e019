use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{check_alpha, CiError, CiTester, DataKind, Dataset, TestCounter};

/// Strata with fewer samples than this are skipped.
pub const MIN_STRATUM_SAMPLES: usize = 10;
/// Strata with any expected cell count below this are skipped.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;

/// Pearson chi-square test for categorical data, stratified by the joint
/// configuration of the conditioning set.
///
/// Statistics and degrees of freedom are pooled over usable strata. Strata
/// that are too small are dropped; when every stratum is dropped the test
/// reports independence.
#[derive(Debug)]
pub struct ChiSquareTest {
    columns: Vec<Vec<u32>>,
    levels: Vec<usize>,
    alpha: f64,
    counter: TestCounter,
}

/// Pooled statistic of one stratified test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub strata_used: usize,
}

impl ChiSquareTest {
    pub fn new(data: &Dataset, alpha: f64) -> Result<Self, CiError> {
        check_alpha(alpha)?;
        let DataKind::Categorical { levels } = data.kind() else {
            return Err(CiError::NotCategorical);
        };
        let columns = (0..data.n_vars())
            .map(|j| data.column(j).iter().map(|&v| v as u32).collect())
            .collect();
        Ok(Self {
            columns,
            levels: levels.clone(),
            alpha,
            counter: TestCounter::new(),
        })
    }

    pub fn outcome(&self, x: usize, y: usize, s: &[usize]) -> ChiSquareOutcome {
        let (lx, ly) = (self.levels[x], self.levels[y]);
        let cells = lx * ly;
        let mut strata: BTreeMap<Vec<u32>, Vec<u64>> = BTreeMap::new();
        let n = self.columns.first().map_or(0, Vec::len);
        let mut key = Vec::with_capacity(s.len());
        for i in 0..n {
            key.clear();
            key.extend(s.iter().map(|&v| self.columns[v][i]));
            let table = match strata.get_mut(&key) {
                Some(t) => t,
                None => strata.entry(key.clone()).or_insert_with(|| vec![0; cells]),
            };
            table[self.columns[x][i] as usize * ly + self.columns[y][i] as usize] += 1;
        }

        let mut statistic = 0.0;
        let mut dof = 0;
        let mut used = 0;
        for table in strata.values() {
            let total: u64 = table.iter().sum();
            if (total as usize) < MIN_STRATUM_SAMPLES {
                continue;
            }
            let rows: Vec<u64> = (0..lx).map(|a| table[a * ly..(a + 1) * ly].iter().sum()).collect();
            let cols: Vec<u64> = (0..ly).map(|b| (0..lx).map(|a| table[a * ly + b]).sum()).collect();
            let expected = |a: usize, b: usize| rows[a] as f64 * cols[b] as f64 / total as f64;
            let usable = (0..lx).all(|a| (0..ly).all(|b| expected(a, b) >= MIN_EXPECTED_COUNT));
            if !usable {
                continue;
            }
            for a in 0..lx {
                for b in 0..ly {
                    let e = expected(a, b);
                    let d = table[a * ly + b] as f64 - e;
                    statistic += d * d / e;
                }
            }
            dof += (lx - 1) * (ly - 1);
            used += 1;
        }
        let p_value = if dof == 0 {
            1.0
        } else {
            ChiSquared::new(dof as f64).expect("positive dof").sf(statistic)
        };
        ChiSquareOutcome {
            statistic,
            dof,
            p_value,
            strata_used: used,
        }
    }
}

impl CiTester for ChiSquareTest {
    fn n_vertices(&self) -> usize {
        self.columns.len()
    }

    fn counter(&self) -> &TestCounter {
        &self.counter
    }

    fn evaluate(&self, x: usize, y: usize, s: &[usize]) -> Result<bool, CiError> {
        Ok(self.outcome(x, y, s).p_value > self.alpha)
    }
}
