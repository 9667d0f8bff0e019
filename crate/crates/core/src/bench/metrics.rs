use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::BenchError;

/// One algorithm run on one replicate. Column order of the results CSV is
/// the field order here. Metric columns are empty on error rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub grid: usize,
    pub replicate: usize,
    pub algorithm: String,
    pub tester: String,
    pub n_vertices: usize,
    pub expected_degree: Option<f64>,
    pub n_targets: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub status: String,
    pub error: String,
    pub ci_tests_total: Option<u64>,
    /// `order:count` pairs joined by `;`.
    pub ci_tests_by_order: String,
    pub wall_ms: Option<f64>,
    pub shd_on_possan: Option<usize>,
    pub intervention_distance: Option<f64>,
    pub n_remaining: Option<usize>,
    pub n_true_possan: Option<usize>,
}

pub const STATUS_OK: &str = "ok";
pub const STATUS_ERROR: &str = "error";

impl MetricsRow {
    pub fn is_ok(&self) -> bool {
        self.status == STATUS_OK
    }
}

/// Trimmed means for one (grid point, algorithm) group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub grid: usize,
    pub algorithm: String,
    pub n_vertices: usize,
    pub expected_degree: Option<f64>,
    pub n_targets: usize,
    pub n_samples: usize,
    pub n_ok: usize,
    pub n_error: usize,
    pub ci_tests_total: Option<f64>,
    pub wall_ms: Option<f64>,
    pub shd_on_possan: Option<f64>,
    pub intervention_distance: Option<f64>,
    pub n_remaining: Option<f64>,
    pub n_true_possan: Option<f64>,
}

/// Mean after dropping `floor(trim * len)` values from each end.
pub fn trimmed_mean(values: &[f64], trim: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let cut = (trim * v.len() as f64).floor() as usize;
    let kept = &v[cut..v.len() - cut];
    if kept.is_empty() {
        return None;
    }
    Some(kept.iter().sum::<f64>() / kept.len() as f64)
}

/// Groups successful rows by grid point and algorithm; each metric is
/// trimmed independently.
pub fn summarize(rows: &[MetricsRow], trim: f64) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(usize, String), Vec<&MetricsRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.grid, r.algorithm.clone())).or_default().push(r);
    }
    groups
        .into_values()
        .map(|g| {
            let ok: Vec<&MetricsRow> = g.iter().copied().filter(|r| r.is_ok()).collect();
            let metric = |f: &dyn Fn(&MetricsRow) -> Option<f64>| {
                let vals: Vec<f64> = ok.iter().filter_map(|r| f(r)).collect();
                trimmed_mean(&vals, trim)
            };
            let first = g[0];
            SummaryRow {
                grid: first.grid,
                algorithm: first.algorithm.clone(),
                n_vertices: first.n_vertices,
                expected_degree: first.expected_degree,
                n_targets: first.n_targets,
                n_samples: first.n_samples,
                n_ok: ok.len(),
                n_error: g.len() - ok.len(),
                ci_tests_total: metric(&|r| r.ci_tests_total.map(|v| v as f64)),
                wall_ms: metric(&|r| r.wall_ms),
                shd_on_possan: metric(&|r| r.shd_on_possan.map(|v| v as f64)),
                intervention_distance: metric(&|r| r.intervention_distance),
                n_remaining: metric(&|r| r.n_remaining.map(|v| v as f64)),
                n_true_possan: metric(&|r| r.n_true_possan.map(|v| v as f64)),
            }
        })
        .collect()
}

pub fn write_csv<W: Write, T: Serialize>(writer: W, rows: &[T]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r).map_err(|e| BenchError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| BenchError::Io(e.to_string()))
}

pub fn read_rows<R: Read>(reader: R) -> Result<Vec<MetricsRow>, BenchError> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| BenchError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(grid: usize, tests: u64) -> MetricsRow {
        MetricsRow {
            grid,
            replicate: 0,
            algorithm: "pc".into(),
            tester: "oracle".into(),
            n_vertices: 5,
            expected_degree: Some(2.0),
            n_targets: 2,
            n_samples: 0,
            seed: 1,
            status: STATUS_OK.into(),
            error: String::new(),
            ci_tests_total: Some(tests),
            ci_tests_by_order: "0:1".into(),
            wall_ms: Some(0.125),
            shd_on_possan: Some(0),
            intervention_distance: None,
            n_remaining: Some(3),
            n_true_possan: Some(3),
        }
    }

    #[test]
    fn trimming() {
        assert_eq!(trimmed_mean(&[1.0], 0.0), Some(1.0));
        let v: Vec<f64> = (0..10).map(f64::from).collect();
        assert_eq!(trimmed_mean(&v, 0.1), Some(4.5));
        assert_eq!(trimmed_mean(&[0.0, 0.0, 100.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0], 0.1), Some(0.875));
        assert_eq!(trimmed_mean(&[], 0.1), None);
    }

    #[test]
    fn single_row_summary_equals_row() {
        let s = summarize(&[row(0, 7)], 0.0);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].ci_tests_total, Some(7.0));
        assert_eq!(s[0].intervention_distance, None);
    }

    #[test]
    fn csv_round_trip() {
        let mut err = row(1, 0);
        err.status = STATUS_ERROR.into();
        err.error = "boom, with comma".into();
        err.ci_tests_total = None;
        err.expected_degree = None;
        let rows = vec![row(0, 3), err];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        assert_eq!(read_rows(&buf[..]).unwrap(), rows);
    }
}
