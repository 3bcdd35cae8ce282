//! Dataset ingestion, encoding, and cross-validation splitting.
//!
//! CSV tables are read into a [`RawTable`] of strings, then encoded: columns
//! whose non-missing cells all parse as numbers become real features, the
//! rest are integer-coded by first appearance (ordinal; splits treat codes as
//! ordered). Missing cells are the empty string or `"?"`.

use std::collections::HashMap;
use std::path::Path;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::{tagged_rng, STREAM_KFOLD};

pub mod synth;

/// How to treat rows with missing feature cells. Rows with a missing label
/// are dropped under either policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissingPolicy {
    Drop,
    MedianImpute,
}

/// An encoded dataset: row-major feature matrix, dense class labels, and the
/// observed per-feature value ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    n_features: usize,
    labels: Vec<usize>,
    class_count: usize,
    feature_ranges: Vec<(f64, f64)>,
}

impl Dataset {
    pub fn from_rows(rows: Vec<Vec<f64>>, labels: Vec<usize>, class_count: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidDataset("no rows".into()));
        }
        let n_features = rows[0].len();
        if n_features == 0 {
            return Err(Error::InvalidDataset("no feature columns".into()));
        }
        if rows.iter().any(|r| r.len() != n_features) {
            return Err(Error::InvalidDataset("ragged feature rows".into()));
        }
        if labels.len() != rows.len() {
            return Err(Error::InvalidDataset(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if class_count < 2 {
            return Err(Error::InvalidDataset(format!(
                "need at least 2 classes, got {class_count}"
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_count) {
            return Err(Error::InvalidDataset(format!(
                "label {bad} out of range for {class_count} classes"
            )));
        }
        let mut features = Vec::with_capacity(rows.len() * n_features);
        for row in &rows {
            features.extend_from_slice(row);
        }
        let feature_ranges = compute_ranges(&features, n_features);
        Ok(Dataset {
            features,
            n_features,
            labels,
            class_count,
            feature_ranges,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Observed `(min, max)` per feature, recomputed whenever rows change.
    pub fn feature_ranges(&self) -> &[(f64, f64)] {
        &self.feature_ranges
    }

    /// New dataset over the given rows only. Feature ranges come from the
    /// subset itself, so a training fold never sees held-out values.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidDataset("empty subset".into()));
        }
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        let feature_ranges = compute_ranges(&features, self.n_features);
        Ok(Dataset {
            features,
            n_features: self.n_features,
            labels,
            class_count: self.class_count,
            feature_ranges,
        })
    }
}

fn compute_ranges(features: &[f64], n_features: usize) -> Vec<(f64, f64)> {
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); n_features];
    for row in features.chunks_exact(n_features) {
        for (k, &v) in row.iter().enumerate() {
            let (lo, hi) = &mut ranges[k];
            if v < *lo {
                *lo = v;
            }
            if v > *hi {
                *hi = v;
            }
        }
    }
    ranges
}

/// A rectangular table of strings as read from disk.
#[derive(Debug, Clone)]
pub struct RawTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    /// Read a comma-separated file. Without a header row, columns are named
    /// by their zero-based index.
    pub fn read_csv<P: AsRef<Path>>(path: P, has_headers: bool) -> Result<Self> {
        let path_str = path.as_ref().display().to_string();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(has_headers)
            .flexible(false)
            .trim(csv::Trim::All)
            .from_path(path.as_ref())
            .map_err(|e| Error::UnparseableFile {
                path: path_str.clone(),
                reason: e.to_string(),
            })?;

        let headers: Vec<String> = if has_headers {
            reader
                .headers()
                .map_err(|e| Error::UnparseableFile {
                    path: path_str.clone(),
                    reason: e.to_string(),
                })?
                .iter()
                .map(|s| s.to_string())
                .collect()
        } else {
            Vec::new()
        };

        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::UnparseableFile {
                path: path_str.clone(),
                reason: e.to_string(),
            })?;
            rows.push(record.iter().map(|s| s.to_string()).collect());
        }

        let headers = if has_headers {
            headers
        } else {
            let width = rows.first().map_or(0, Vec::len);
            (0..width).map(|i| i.to_string()).collect()
        };
        if rows.is_empty() {
            return Err(Error::UnparseableFile {
                path: path_str,
                reason: "no data rows".into(),
            });
        }
        Ok(RawTable { headers, rows })
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Encode the table into a [`Dataset`].
    ///
    /// Numeric columns (every non-missing cell parses as a real) keep their
    /// values; other columns are coded 0,1,2,... by first appearance. Labels
    /// are coded the same way into dense class indices.
    pub fn encode(&self, label_column: &str, policy: MissingPolicy) -> Result<Dataset> {
        let label_idx = self
            .headers
            .iter()
            .position(|h| h == label_column)
            .ok_or_else(|| Error::LabelColumnNotFound(label_column.to_string()))?;
        let feature_idx: Vec<usize> = (0..self.headers.len())
            .filter(|&i| i != label_idx)
            .collect();
        if feature_idx.is_empty() {
            return Err(Error::InvalidDataset("no feature columns".into()));
        }

        // Rows with a missing label never survive; a class cannot be imputed.
        let retained: Vec<usize> = (0..self.rows.len())
            .filter(|&r| {
                let label_ok = !is_missing(&self.rows[r][label_idx]);
                match policy {
                    MissingPolicy::Drop => {
                        label_ok && feature_idx.iter().all(|&c| !is_missing(&self.rows[r][c]))
                    }
                    MissingPolicy::MedianImpute => label_ok,
                }
            })
            .collect();
        if retained.is_empty() {
            return Err(Error::AllRowsDropped);
        }

        // Column values with missing cells as None, numeric or ordinal-coded.
        let mut columns: Vec<Vec<Option<f64>>> = Vec::with_capacity(feature_idx.len());
        for &c in &feature_idx {
            let cells: Vec<&str> = retained.iter().map(|&r| self.rows[r][c].as_str()).collect();
            columns.push(encode_column(&cells)?);
        }

        if policy == MissingPolicy::MedianImpute {
            for (col_pos, col) in columns.iter_mut().enumerate() {
                let mut observed: Vec<f64> = col.iter().flatten().copied().collect();
                if observed.is_empty() {
                    return Err(Error::InvalidDataset(format!(
                        "column {:?} has no observed values",
                        self.headers[feature_idx[col_pos]]
                    )));
                }
                let med = median(&mut observed);
                for cell in col.iter_mut() {
                    cell.get_or_insert(med);
                }
            }
        }

        let mut label_codes: HashMap<String, usize> = HashMap::new();
        let mut labels = Vec::with_capacity(retained.len());
        for &r in &retained {
            let cell = self.rows[r][label_idx].as_str();
            let next = label_codes.len();
            let code = *label_codes.entry(cell.to_string()).or_insert(next);
            labels.push(code);
        }
        let class_count = label_codes.len();
        if class_count < 2 {
            return Err(Error::SingleClassLabels);
        }

        let rows: Vec<Vec<f64>> = (0..retained.len())
            .map(|i| columns.iter().map(|col| col[i].unwrap()).collect())
            .collect();
        Dataset::from_rows(rows, labels, class_count)
    }
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "?"
}

/// Numeric column if every non-missing cell parses to a finite value;
/// otherwise ordinal codes assigned by first appearance.
fn encode_column(cells: &[&str]) -> Result<Vec<Option<f64>>> {
    let numeric = cells
        .iter()
        .filter(|c| !is_missing(c))
        .all(|c| c.parse::<f64>().is_ok_and(f64::is_finite));
    if numeric {
        Ok(cells
            .iter()
            .map(|c| {
                if is_missing(c) {
                    None
                } else {
                    Some(c.parse::<f64>().unwrap())
                }
            })
            .collect())
    } else {
        let mut codes: HashMap<String, usize> = HashMap::new();
        Ok(cells
            .iter()
            .map(|c| {
                if is_missing(c) {
                    None
                } else {
                    let next = codes.len();
                    Some(*codes.entry((*c).to_string()).or_insert(next) as f64)
                }
            })
            .collect())
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Load and encode a CSV file in one step.
pub fn load_csv<P: AsRef<Path>>(
    path: P,
    label_column: &str,
    policy: MissingPolicy,
    has_headers: bool,
) -> Result<Dataset> {
    RawTable::read_csv(path, has_headers)?.encode(label_column, policy)
}

/// Fold assignment for k-fold cross-validation: a pure function of
/// `(n, k, seed)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    assignments: Vec<usize>,
    folds: usize,
}

impl FoldPlan {
    pub fn folds(&self) -> usize {
        self.folds
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] != fold)
            .collect()
    }

    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == fold)
            .collect()
    }
}

/// Seeded shuffle followed by round-robin assignment; fold sizes differ by at
/// most one.
pub fn kfold(n: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::FoldCountTooSmall(k));
    }
    if n < k {
        return Err(Error::FoldCountExceedsRows { n, k });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = tagged_rng(seed, STREAM_KFOLD);
    order.shuffle(&mut rng);
    let mut assignments = vec![0usize; n];
    for (pos, &idx) in order.iter().enumerate() {
        assignments[idx] = pos % k;
    }
    Ok(FoldPlan {
        assignments,
        folds: k,
    })
}
