//! Labeled datasets: in-memory representation, feature augmentation, disk
//! formats, and split construction for the experiment protocols.
//!
//! Two disk formats are supported:
//!
//! * dense: UTF-8 CSV with a header row, one `label` column (any position),
//!   every other column a numeric feature; column order defines feature order.
//! * sparse: one example per line, `label idx:val idx:val ...` with 1-based
//!   feature indices; absent indices are zero.
//!
//! Labels are remapped to contiguous `0..K-1` at load time in ascending order
//! of original value; the original values are kept in [`LabeledDataset::label_map`].

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MmdtError, Result};
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Source,
    Target,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Source => write!(f, "source"),
            Domain::Target => write!(f, "target"),
        }
    }
}

/// A feature matrix with integer class labels and a domain tag.
///
/// Immutable after construction. `labels[i] < num_classes` always holds and
/// `label_map[k]` is the original on-disk label of class `k` (`k as i64` for
/// generated data).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: DenseMatrix,
    labels: Vec<usize>,
    domain: Domain,
    num_classes: usize,
    label_map: Vec<i64>,
}

impl LabeledDataset {
    /// Builds a dataset, checking every invariant.
    pub fn new(
        features: DenseMatrix,
        labels: Vec<usize>,
        domain: Domain,
        num_classes: usize,
        label_map: Vec<i64>,
    ) -> Result<Self> {
        if labels.len() != features.rows() {
            return Err(MmdtError::validation(format!(
                "{} labels for {} feature rows",
                labels.len(),
                features.rows()
            )));
        }
        if !features.is_finite() {
            return Err(MmdtError::validation("features contain non-finite values"));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= num_classes) {
            return Err(MmdtError::validation(format!(
                "label {bad} out of range for {num_classes} classes"
            )));
        }
        if label_map.len() != num_classes {
            return Err(MmdtError::validation(format!(
                "label map has {} entries for {num_classes} classes",
                label_map.len()
            )));
        }
        Ok(LabeledDataset {
            features,
            labels,
            domain,
            num_classes,
            label_map,
        })
    }

    /// Dataset with the identity label map `0..K-1`.
    pub fn with_default_labels(
        features: DenseMatrix,
        labels: Vec<usize>,
        domain: Domain,
        num_classes: usize,
    ) -> Result<Self> {
        let map = (0..num_classes as i64).collect();
        LabeledDataset::new(features, labels, domain, num_classes, map)
    }

    /// An empty dataset with the given shape metadata.
    pub fn empty(dim: usize, num_classes: usize, domain: Domain) -> Self {
        LabeledDataset {
            features: DenseMatrix::zeros(0, dim),
            labels: Vec::new(),
            domain,
            num_classes,
            label_map: (0..num_classes as i64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.features.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn features(&self) -> &DenseMatrix {
        &self.features
    }

    pub fn feature_row(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_map(&self) -> &[i64] {
        &self.label_map
    }

    pub fn original_label(&self, class: usize) -> i64 {
        self.label_map[class]
    }

    /// Number of examples carrying each class label.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Dataset restricted to `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> LabeledDataset {
        let rows: Vec<Vec<f64>> = indices
            .iter()
            .map(|&i| self.features.row(i).to_vec())
            .collect();
        LabeledDataset {
            features: DenseMatrix::from_rows(&rows).expect("uniform rows"),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            domain: self.domain,
            num_classes: self.num_classes,
            label_map: self.label_map.clone(),
        }
    }

    /// Re-indexes this dataset's classes so they agree with `reference`'s
    /// label map. Every original label here must appear in the reference map;
    /// the result uses the reference's `num_classes` and map.
    pub fn align_to(&self, reference: &LabeledDataset) -> Result<LabeledDataset> {
        let lookup: BTreeMap<i64, usize> = reference
            .label_map
            .iter()
            .enumerate()
            .map(|(k, &orig)| (orig, k))
            .collect();
        let mut labels = Vec::with_capacity(self.labels.len());
        for &l in &self.labels {
            let orig = self.label_map[l];
            match lookup.get(&orig) {
                Some(&k) => labels.push(k),
                None => {
                    return Err(MmdtError::validation(format!(
                        "label {orig} not present in the reference dataset"
                    )))
                }
            }
        }
        LabeledDataset::new(
            self.features.clone(),
            labels,
            self.domain,
            reference.num_classes,
            reference.label_map.clone(),
        )
    }
}

/// Appends the constant 1 (bias trick).
pub fn augment(x: &[f64]) -> Result<Vec<f64>> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(MmdtError::validation("non-finite feature value"));
    }
    let mut out = Vec::with_capacity(x.len() + 1);
    out.extend_from_slice(x);
    out.push(1.0);
    Ok(out)
}

/// Parameters for [`make_split`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_per_class: usize,
    #[serde(default)]
    pub holdout_classes: Vec<usize>,
    pub seed: u64,
}

/// Draws `train_per_class` examples per non-holdout class into a train set;
/// the complement (including every holdout-class example) becomes the test
/// set. The selection is a pure function of `spec.seed`.
pub fn make_split(
    data: &LabeledDataset,
    spec: &SplitSpec,
) -> Result<(LabeledDataset, LabeledDataset)> {
    for &h in &spec.holdout_classes {
        if h >= data.num_classes() {
            return Err(MmdtError::validation(format!(
                "holdout class {h} out of range for {} classes",
                data.num_classes()
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut train_idx: Vec<usize> = Vec::new();
    for class in 0..data.num_classes() {
        if spec.holdout_classes.contains(&class) {
            continue;
        }
        let mut members: Vec<usize> = (0..data.len())
            .filter(|&i| data.labels()[i] == class)
            .collect();
        if members.len() < spec.train_per_class {
            return Err(MmdtError::validation(format!(
                "class {class} has {} examples, needs {}",
                members.len(),
                spec.train_per_class
            )));
        }
        members.shuffle(&mut rng);
        train_idx.extend_from_slice(&members[..spec.train_per_class]);
    }
    train_idx.sort_unstable();
    let mut in_train = vec![false; data.len()];
    for &i in &train_idx {
        in_train[i] = true;
    }
    let test_idx: Vec<usize> = (0..data.len()).filter(|&i| !in_train[i]).collect();
    Ok((data.subset(&train_idx), data.subset(&test_idx)))
}

fn fmt_f64(v: f64) -> String {
    // Display for f64 prints the shortest decimal that round-trips.
    format!("{v}")
}

/// Loads the dense CSV format.
pub fn load_dense(path: impl AsRef<Path>, domain: Domain) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| MmdtError::io(path.display().to_string(), e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(BufReader::new(file));

    let headers = reader
        .headers()
        .map_err(|e| MmdtError::parse(1, e.to_string()))?
        .clone();
    let label_col = headers
        .iter()
        .position(|h| h == "label")
        .ok_or_else(|| MmdtError::parse(1, "missing `label` column".to_string()))?;
    let dim = headers.len() - 1;

    let mut raw_labels: Vec<i64> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = match &e {
                err => err
                    .position()
                    .map(|p| p.line())
                    .unwrap_or(0),
            };
            MmdtError::parse(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != headers.len() {
            return Err(MmdtError::parse(
                line,
                format!("expected {} fields, found {}", headers.len(), record.len()),
            ));
        }
        let mut feats = Vec::with_capacity(dim);
        for (col, field) in record.iter().enumerate() {
            if col == label_col {
                let l: i64 = field.trim().parse().map_err(|_| {
                    MmdtError::parse(line, format!("label `{field}` is not an integer"))
                })?;
                raw_labels.push(l);
            } else {
                let v: f64 = field.trim().parse().map_err(|_| {
                    MmdtError::parse(line, format!("feature cell `{field}` is not numeric"))
                })?;
                if !v.is_finite() {
                    return Err(MmdtError::parse(line, "non-finite feature value".to_string()));
                }
                feats.push(v);
            }
        }
        rows.push(feats);
    }

    build_remapped(rows, raw_labels, dim, domain)
}

/// Writes the dense CSV format. Feature columns are named `f0..f{d-1}` and
/// labels are written as the dataset's original label values.
pub fn save_dense(path: impl AsRef<Path>, data: &LabeledDataset) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    out.push_str("label");
    for j in 0..data.dim() {
        out.push_str(&format!(",f{j}"));
    }
    out.push('\n');
    for i in 0..data.len() {
        out.push_str(&data.original_label(data.labels()[i]).to_string());
        for &v in data.feature_row(i) {
            out.push(',');
            out.push_str(&fmt_f64(v));
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| MmdtError::io(path.display().to_string(), e))
}

/// Loads the sparse `label idx:val ...` format into a dense dataset of
/// dimension `dim`.
pub fn load_sparse(path: impl AsRef<Path>, dim: usize, domain: Domain) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| MmdtError::io(path.display().to_string(), e))?;
    let reader = BufReader::new(file);

    let mut raw_labels: Vec<i64> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno as u64 + 1;
        let line = line.map_err(|e| MmdtError::parse(lineno, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let label_tok = parts.next().expect("non-empty line");
        let label: i64 = label_tok
            .parse()
            .map_err(|_| MmdtError::parse(lineno, format!("label `{label_tok}` is not an integer")))?;
        let mut feats = vec![0.0; dim];
        let mut seen = vec![false; dim];
        for tok in parts {
            let (idx_s, val_s) = tok
                .split_once(':')
                .ok_or_else(|| MmdtError::parse(lineno, format!("malformed pair `{tok}`")))?;
            let idx: usize = idx_s
                .parse()
                .map_err(|_| MmdtError::parse(lineno, format!("bad feature index `{idx_s}`")))?;
            if idx == 0 || idx > dim {
                return Err(MmdtError::parse(
                    lineno,
                    format!("feature index {idx} outside 1..={dim}"),
                ));
            }
            if seen[idx - 1] {
                return Err(MmdtError::parse(lineno, format!("duplicate feature index {idx}")));
            }
            seen[idx - 1] = true;
            let val: f64 = val_s
                .parse()
                .map_err(|_| MmdtError::parse(lineno, format!("bad feature value `{val_s}`")))?;
            if !val.is_finite() {
                return Err(MmdtError::parse(lineno, "non-finite feature value".to_string()));
            }
            feats[idx - 1] = val;
        }
        raw_labels.push(label);
        rows.push(feats);
    }

    build_remapped(rows, raw_labels, dim, domain)
}

/// Writes the sparse format; zero entries are omitted.
pub fn save_sparse(path: impl AsRef<Path>, data: &LabeledDataset) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| MmdtError::io(path.display().to_string(), e))?;
    let mut w = std::io::BufWriter::new(file);
    for i in 0..data.len() {
        let mut line = data.original_label(data.labels()[i]).to_string();
        for (j, &v) in data.feature_row(i).iter().enumerate() {
            if v != 0.0 {
                line.push_str(&format!(" {}:{}", j + 1, fmt_f64(v)));
            }
        }
        line.push('\n');
        w.write_all(line.as_bytes())
            .map_err(|e| MmdtError::io(path.display().to_string(), e))?;
    }
    w.flush()
        .map_err(|e| MmdtError::io(path.display().to_string(), e))
}

fn build_remapped(
    rows: Vec<Vec<f64>>,
    raw_labels: Vec<i64>,
    dim: usize,
    domain: Domain,
) -> Result<LabeledDataset> {
    let mut distinct: Vec<i64> = raw_labels.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let index: BTreeMap<i64, usize> = distinct
        .iter()
        .enumerate()
        .map(|(k, &orig)| (orig, k))
        .collect();
    let labels: Vec<usize> = raw_labels.iter().map(|l| index[l]).collect();
    let features = if rows.is_empty() {
        DenseMatrix::zeros(0, dim)
    } else {
        DenseMatrix::from_rows(&rows)?
    };
    LabeledDataset::new(features, labels, domain, distinct.len(), distinct)
}
