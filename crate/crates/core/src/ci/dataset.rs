use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::Rng;

use super::CiError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataKind {
    Continuous,
    /// Values are level indices `0..levels[j]` stored as `f64`.
    Categorical { levels: Vec<usize> },
}

/// Column-major sample matrix whose column `j` belongs to graph vertex `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    kind: DataKind,
}

impl Dataset {
    pub fn continuous(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self, CiError> {
        check_shape(&names, &columns)?;
        if columns.iter().flatten().any(|v| !v.is_finite()) {
            return Err(CiError::Data("non-finite value in continuous data".into()));
        }
        Ok(Self {
            names,
            columns,
            kind: DataKind::Continuous,
        })
    }

    /// Categorical data; each column's level count is its maximum value plus
    /// one, and at least two.
    pub fn categorical(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self, CiError> {
        check_shape(&names, &columns)?;
        let mut levels = Vec::with_capacity(columns.len());
        for (j, col) in columns.iter().enumerate() {
            let mut max = 0usize;
            for &v in col {
                if v < 0.0 || v.fract() != 0.0 || !v.is_finite() {
                    return Err(CiError::Data(format!(
                        "column {} holds non-level value {v}",
                        names[j]
                    )));
                }
                max = max.max(v as usize);
            }
            levels.push((max + 1).max(2));
        }
        Ok(Self {
            names,
            columns,
            kind: DataKind::Categorical { levels },
        })
    }

    pub fn n_samples(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn n_vars(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn kind(&self) -> &DataKind {
        &self.kind
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self.kind, DataKind::Categorical { .. })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Rows `rows` in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            names: self.names.clone(),
            columns: self
                .columns
                .iter()
                .map(|c| rows.iter().map(|&r| c[r]).collect())
                .collect(),
            kind: self.kind.clone(),
        }
    }

    /// Reorders (and possibly subsets) columns to match `names`.
    pub fn with_column_order(&self, names: &[String]) -> Result<Dataset, CiError> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| {
                self.index_of(n)
                    .ok_or_else(|| CiError::Data(format!("dataset has no column {n}")))
            })
            .collect::<Result<_, _>>()?;
        let kind = match &self.kind {
            DataKind::Continuous => DataKind::Continuous,
            DataKind::Categorical { levels } => DataKind::Categorical {
                levels: idx.iter().map(|&j| levels[j]).collect(),
            },
        };
        Ok(Dataset {
            names: names.to_vec(),
            columns: idx.iter().map(|&j| self.columns[j].clone()).collect(),
            kind,
        })
    }

    /// Random split into a discovery part of `ceil(n/2)` rows and an
    /// estimation part holding the rest.
    pub fn split_half<R: Rng + ?Sized>(&self, rng: &mut R) -> (Dataset, Dataset) {
        let mut rows: Vec<usize> = (0..self.n_samples()).collect();
        rows.shuffle(rng);
        let cut = rows.len().div_ceil(2);
        (self.select_rows(&rows[..cut]), self.select_rows(&rows[cut..]))
    }

    /// Reads a CSV file with a header row of vertex names.
    pub fn read_csv<R: Read>(reader: R, categorical: bool) -> Result<Self, CiError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let names: Vec<String> = rdr
            .headers()
            .map_err(|e| CiError::Data(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut columns = vec![Vec::new(); names.len()];
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| CiError::Data(e.to_string()))?;
            for (j, field) in rec.iter().enumerate() {
                let v: f64 = field.parse().map_err(|_| {
                    CiError::Data(format!("row {}: cannot parse {field:?}", i + 2))
                })?;
                columns[j].push(v);
            }
        }
        if categorical {
            Self::categorical(names, columns)
        } else {
            Self::continuous(names, columns)
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), CiError> {
        let mut w = csv::Writer::from_writer(writer);
        let err = |e: csv::Error| CiError::Data(e.to_string());
        w.write_record(&self.names).map_err(err)?;
        let mut row = Vec::with_capacity(self.n_vars());
        for i in 0..self.n_samples() {
            row.clear();
            for c in &self.columns {
                row.push(if self.is_categorical() {
                    format!("{}", c[i] as usize)
                } else {
                    format!("{}", c[i])
                });
            }
            w.write_record(&row).map_err(err)?;
        }
        w.flush().map_err(|e| CiError::Data(e.to_string()))
    }
}

fn check_shape(names: &[String], columns: &[Vec<f64>]) -> Result<(), CiError> {
    if names.len() != columns.len() {
        return Err(CiError::Data(format!(
            "{} names for {} columns",
            names.len(),
            columns.len()
        )));
    }
    if let Some(first) = columns.first() {
        if columns.iter().any(|c| c.len() != first.len()) {
            return Err(CiError::Data("columns have unequal length".into()));
        }
    }
    Ok(())
}
