//! Labeled numeric datasets: delimited-text loading and re-serialization,
//! per-attribute summary statistics, and seeded cross-validation fold
//! assignments.
//!
//! A [`Dataset`] is an n×d matrix of finite feature values plus one
//! categorical label per record. Labels are stored as indices into
//! [`Dataset::class_names`], assigned in order of first appearance, so
//! class indices are stable for a given input file.

use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// Which column of a delimited file holds the class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelColumn {
    /// The trailing column (the UCI Iris layout).
    Last,
    /// A zero-based column index.
    Index(usize),
}

/// Column roles and framing for delimited text input/output.
#[derive(Debug, Clone)]
pub struct CsvSchema {
    pub delimiter: u8,
    pub has_header: bool,
    pub label_column: LabelColumn,
}

impl Default for CsvSchema {
    /// Comma-separated, no header, label in the trailing column; the UCI
    /// Iris file loads with this schema unchanged.
    fn default() -> Self {
        CsvSchema {
            delimiter: b',',
            has_header: false,
            label_column: LabelColumn::Last,
        }
    }
}

impl CsvSchema {
    fn label_index(&self, width: usize) -> Result<usize> {
        match self.label_column {
            LabelColumn::Last => Ok(width - 1),
            LabelColumn::Index(i) if i < width => Ok(i),
            LabelColumn::Index(i) => Err(Error::Config(format!(
                "label column {i} out of range for {width}-column input"
            ))),
        }
    }
}

/// Divisor convention for standard deviations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StdConvention {
    /// Divisor n.
    #[default]
    Population,
    /// Divisor n−1 (requires n ≥ 2).
    Sample,
}

/// Per-attribute mean and standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeStats {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

/// A partition of record indices into folds of near-equal size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    fold_count: usize,
    fold_of: Vec<usize>,
}

impl FoldAssignment {
    pub fn fold_count(&self) -> usize {
        self.fold_count
    }

    /// Fold index per record, in record order.
    pub fn fold_of(&self) -> &[usize] {
        &self.fold_of
    }

    /// Record indices held out by fold `fold`, ascending.
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len())
            .filter(|&i| self.fold_of[i] == fold)
            .collect()
    }

    /// Record indices outside fold `fold`, ascending.
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len())
            .filter(|&i| self.fold_of[i] != fold)
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.fold_count];
        for &f in &self.fold_of {
            sizes[f] += 1;
        }
        sizes
    }
}

/// An n×d matrix of finite feature values with one class label per record.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>, // row-major, n_records × n_attributes
    n_attributes: usize,
    labels: Vec<usize>, // index into class_names
    attribute_names: Vec<String>,
    class_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from feature rows and one label string per row.
    /// Attribute names default to `f0..f{d-1}`; class names are collected
    /// in order of first appearance.
    pub fn from_rows<S: AsRef<str>>(rows: Vec<Vec<f64>>, labels: Vec<S>) -> Result<Dataset> {
        if rows.is_empty() {
            return Err(Error::EmptyInput("no records".into()));
        }
        if rows.len() != labels.len() {
            return Err(Error::Usage(format!(
                "{} feature rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let d = rows[0].len();
        let mut features = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::Usage(format!(
                    "row {i} has {} attributes, expected {d}",
                    row.len()
                )));
            }
            features.extend_from_slice(row);
        }
        let mut class_names: Vec<String> = Vec::new();
        let mut label_idx = Vec::with_capacity(labels.len());
        for label in &labels {
            let label = label.as_ref();
            let idx = match class_names.iter().position(|c| c == label) {
                Some(idx) => idx,
                None => {
                    class_names.push(label.to_string());
                    class_names.len() - 1
                }
            };
            label_idx.push(idx);
        }
        let attribute_names = (0..d).map(|j| format!("f{j}")).collect();
        Dataset::from_parts(features, d, label_idx, attribute_names, class_names)
    }

    /// Validated constructor over pre-indexed labels.
    pub fn from_parts(
        features: Vec<f64>,
        n_attributes: usize,
        labels: Vec<usize>,
        attribute_names: Vec<String>,
        class_names: Vec<String>,
    ) -> Result<Dataset> {
        if n_attributes == 0 {
            return Err(Error::Usage("need at least one attribute".into()));
        }
        if labels.is_empty() {
            return Err(Error::EmptyInput("no records".into()));
        }
        if features.len() != labels.len() * n_attributes {
            return Err(Error::Usage(format!(
                "{} feature values do not form {} records of {} attributes",
                features.len(),
                labels.len(),
                n_attributes
            )));
        }
        if attribute_names.len() != n_attributes {
            return Err(Error::Usage(format!(
                "{} attribute names for {} attributes",
                attribute_names.len(),
                n_attributes
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::Usage(format!(
                "non-finite feature value at record {}, attribute {}",
                pos / n_attributes,
                pos % n_attributes
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::Usage(format!(
                "label index {bad} outside the {} known classes",
                class_names.len()
            )));
        }
        Ok(Dataset {
            features,
            n_attributes,
            labels,
            attribute_names,
            class_names,
        })
    }

    /// Reads a delimited text stream according to `schema`. Row order is
    /// preserved; errors carry the 1-based line number of the offending row.
    pub fn from_csv<R: Read>(reader: R, schema: &CsvSchema) -> Result<Dataset> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(schema.delimiter)
            .has_headers(false) // handled manually so line numbers stay honest
            .flexible(true)
            .from_reader(reader);

        let mut width: Option<usize> = None;
        let mut label_idx = 0;
        let mut attribute_names: Vec<String> = Vec::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        let mut saw_header = false;

        for record in rdr.records() {
            let record = record.map_err(|e| match e.position() {
                Some(pos) => Error::parse(pos.line(), e.to_string()),
                None => Error::parse(0, e.to_string()),
            })?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() == 1 && record[0].trim().is_empty() {
                continue; // blank line
            }

            let w = match width {
                Some(w) if record.len() != w => {
                    return Err(Error::parse(
                        line,
                        format!("expected {w} columns, found {}", record.len()),
                    ));
                }
                Some(w) => w,
                None => {
                    let w = record.len();
                    if w < 2 {
                        return Err(Error::parse(
                            line,
                            "need at least one feature column and one label column",
                        ));
                    }
                    width = Some(w);
                    label_idx = schema.label_index(w)?;
                    w
                }
            };

            if schema.has_header && !saw_header {
                saw_header = true;
                attribute_names = (0..w)
                    .filter(|&j| j != label_idx)
                    .map(|j| record[j].trim().to_string())
                    .collect();
                continue;
            }

            let mut row = Vec::with_capacity(w - 1);
            for j in 0..w {
                let cell = record[j].trim();
                if j == label_idx {
                    labels.push(cell.to_string());
                } else {
                    let value: f64 = cell.parse().map_err(|_| {
                        Error::parse(line, format!("non-numeric feature value {cell:?}"))
                    })?;
                    row.push(value);
                }
            }
            rows.push(row);
        }

        if rows.is_empty() {
            return Err(Error::EmptyInput("no data rows".into()));
        }
        let mut data = Dataset::from_rows(rows, labels)?;
        if schema.has_header {
            data.attribute_names = attribute_names;
        }
        Ok(data)
    }

    /// Serializes as delimited text in full precision, so re-loading
    /// reproduces every feature value bit-exactly.
    pub fn to_csv<W: Write>(&self, writer: W, schema: &CsvSchema) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .delimiter(schema.delimiter)
            .from_writer(writer);
        let width = self.n_attributes + 1;
        let label_idx = schema.label_index(width)?;

        if schema.has_header {
            let mut header = self.attribute_names.clone();
            header.insert(label_idx, "label".to_string());
            wtr.write_record(&header)?;
        }
        for i in 0..self.n_records() {
            let mut cells: Vec<String> = self.row(i).iter().map(|v| format_value(*v)).collect();
            cells.insert(label_idx, self.class_names[self.labels[i]].clone());
            wtr.write_record(&cells)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn n_records(&self) -> usize {
        self.labels.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.n_attributes
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_attributes..(i + 1) * self.n_attributes]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks_exact(self.n_attributes)
    }

    pub fn feature(&self, record: usize, attribute: usize) -> f64 {
        self.features[record * self.n_attributes + attribute]
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    /// Class index of record `i`.
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_name(&self, i: usize) -> &str {
        &self.class_names[self.labels[i]]
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_names.len()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// New dataset with the same shape, names, and labels but different
    /// feature values.
    pub fn with_features(&self, features: Vec<f64>) -> Result<Dataset> {
        Dataset::from_parts(
            features,
            self.n_attributes,
            self.labels.clone(),
            self.attribute_names.clone(),
            self.class_names.clone(),
        )
    }

    /// Sub-dataset over `indices`, keeping the full class list so class
    /// indices stay aligned with the parent.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let mut features = Vec::with_capacity(indices.len() * self.n_attributes);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.n_records() {
                return Err(Error::Usage(format!(
                    "record index {i} out of range for {} records",
                    self.n_records()
                )));
            }
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset::from_parts(
            features,
            self.n_attributes,
            labels,
            self.attribute_names.clone(),
            self.class_names.clone(),
        )
    }

    /// Per-attribute mean and population (divisor n) standard deviation.
    pub fn attribute_stats(&self) -> AttributeStats {
        self.attribute_stats_with(StdConvention::Population)
            .expect("population stats are defined for any valid dataset")
    }

    /// Per-attribute mean and standard deviation under the chosen divisor
    /// convention. Uses Welford's single-pass update.
    pub fn attribute_stats_with(&self, convention: StdConvention) -> Result<AttributeStats> {
        let n = self.n_records();
        if convention == StdConvention::Sample && n < 2 {
            return Err(Error::Usage(
                "sample standard deviation requires at least 2 records".into(),
            ));
        }
        let d = self.n_attributes;
        let mut means = vec![0.0; d];
        let mut m2 = vec![0.0; d];
        for (i, row) in self.rows().enumerate() {
            let count = (i + 1) as f64;
            for j in 0..d {
                let delta = row[j] - means[j];
                means[j] += delta / count;
                m2[j] += delta * (row[j] - means[j]);
            }
        }
        let divisor = match convention {
            StdConvention::Population => n as f64,
            StdConvention::Sample => (n - 1) as f64,
        };
        let stds = m2.iter().map(|&v| (v / divisor).sqrt()).collect();
        Ok(AttributeStats { means, stds })
    }

    /// Assigns every record to one of `fold_count` folds: a seeded shuffle
    /// of record indices followed by round-robin dealing. The stratified
    /// variant shuffles and deals per class (in class-index order),
    /// continuing the round-robin offset across classes so total fold
    /// sizes stay within one of each other.
    ///
    /// Equal `(data, fold_count, seed, stratified)` inputs always produce
    /// the identical assignment.
    pub fn split_folds(
        &self,
        fold_count: usize,
        seed: u64,
        stratified: bool,
    ) -> Result<FoldAssignment> {
        let n = self.n_records();
        if fold_count < 2 || fold_count > n {
            return Err(Error::Config(format!(
                "fold count {fold_count} outside the valid range 2..={n}"
            )));
        }
        if stratified {
            if let Some(&smallest) = self.class_counts().iter().min() {
                if fold_count > smallest {
                    return Err(Error::Config(format!(
                        "fold count {fold_count} exceeds the smallest class size {smallest}"
                    )));
                }
            }
        }

        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut fold_of = vec![0; n];
        if stratified {
            let mut dealt = 0;
            for class in 0..self.n_classes() {
                let mut members: Vec<usize> =
                    (0..n).filter(|&i| self.labels[i] == class).collect();
                members.shuffle(&mut rng);
                for (p, &i) in members.iter().enumerate() {
                    fold_of[i] = (dealt + p) % fold_count;
                }
                dealt += members.len();
            }
        } else {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            for (p, &i) in order.iter().enumerate() {
                fold_of[i] = p % fold_count;
            }
        }
        Ok(FoldAssignment {
            fold_count,
            fold_of,
        })
    }
}

/// Shortest decimal that reparses to the same bits, with `.0` appended to
/// integral values so whole numbers stay visibly floating-point.
fn format_value(value: f64) -> String {
    let text = value.to_string();
    if text.contains('.') {
        text
    } else {
        format!("{text}.0")
    }
}
