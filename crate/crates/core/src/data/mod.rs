//! Binary-labelled numeric datasets: representation, ingestion, fold
//! planning, normalisation and synthetic generation.

mod folds;
mod io;
mod synth;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use folds::{stratified_folds, FoldPlan};
pub use io::{load_csv, load_dataset, load_keel, read_csv, read_keel, DataFormat};
pub use synth::{generate, make_imbalanced, SynthSpec, Synthetic};

/// Class role of a row. The minority class is the positive class everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Class {
    Minority,
    Majority,
}

impl Class {
    pub fn other(self) -> Class {
        match self {
            Class::Minority => Class::Majority,
            Class::Majority => Class::Minority,
        }
    }

    pub fn is_minority(self) -> bool {
        self == Class::Minority
    }
}

/// Text labels of the two classes as they appear in the source file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNames {
    pub minority: String,
    pub majority: String,
}

impl Default for ClassNames {
    fn default() -> Self {
        ClassNames {
            minority: "minority".into(),
            majority: "majority".into(),
        }
    }
}

impl ClassNames {
    pub fn name(&self, class: Class) -> &str {
        match class {
            Class::Minority => &self.minority,
            Class::Majority => &self.majority,
        }
    }
}

/// A dense n×p feature matrix with one binary label per row.
///
/// Rows are stored row-major. Datasets built through [`Dataset::new`] (and
/// hence every loader) satisfy the ingestion invariants: both classes
/// present, minority no more frequent than majority, finite features.
/// Resampled datasets keep the designated minority even when oversampling
/// makes it the larger class.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    n_features: usize,
    labels: Vec<Class>,
    class_names: ClassNames,
    feature_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from text labels. When `minority` is `None` the rarer
    /// label is chosen; equal counts go to the lexicographically smaller one.
    pub fn new(
        rows: Vec<Vec<f64>>,
        labels: Vec<String>,
        minority: Option<&str>,
        feature_names: Vec<String>,
    ) -> Result<Dataset> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if rows.len() != labels.len() {
            return Err(Error::InvalidConfig(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }

        let mut distinct: Vec<&str> = labels.iter().map(String::as_str).collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() > 2 {
            return Err(Error::TooManyClasses(
                distinct.iter().map(|s| s.to_string()).collect(),
            ));
        }
        if distinct.len() < 2 {
            return Err(Error::NotBinary(distinct.len()));
        }
        let count = |l: &str| labels.iter().filter(|x| x.as_str() == l).count();
        let (c0, c1) = (count(distinct[0]), count(distinct[1]));

        let minority = match minority {
            Some(m) => {
                if !distinct.contains(&m) {
                    return Err(Error::UnknownMinority(m.to_string()));
                }
                m.to_string()
            }
            None if c1 < c0 => distinct[1].to_string(),
            None => distinct[0].to_string(),
        };
        let majority = distinct
            .iter()
            .find(|l| **l != minority)
            .map(|l| l.to_string())
            .expect("two distinct labels");
        let (n_min, n_maj) = (count(&minority), count(&majority));
        if n_min > n_maj {
            return Err(Error::MinorityNotRarer {
                label: minority,
                minority: n_min,
                majority: n_maj,
            });
        }

        let classes = labels
            .iter()
            .map(|l| {
                if *l == minority {
                    Class::Minority
                } else {
                    Class::Majority
                }
            })
            .collect();
        let names = ClassNames { minority, majority };
        Dataset::from_rows(rows, classes, names, feature_names)
    }

    /// Builds a dataset from rows and class roles without the class-balance
    /// checks of [`Dataset::new`]. Shapes and finiteness are still verified.
    pub fn from_rows(
        rows: Vec<Vec<f64>>,
        labels: Vec<Class>,
        class_names: ClassNames,
        feature_names: Vec<String>,
    ) -> Result<Dataset> {
        let p = feature_names.len();
        if p == 0 {
            return Err(Error::InvalidConfig("dataset needs at least one feature".into()));
        }
        if rows.len() != labels.len() {
            return Err(Error::InvalidConfig(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let mut features = Vec::with_capacity(rows.len() * p);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != p {
                return Err(Error::InvalidConfig(format!(
                    "row {i} has {} values, expected {p}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidConfig(format!("row {i} has a non-finite value")));
            }
            features.extend(row);
        }
        Ok(Dataset {
            features,
            n_features: p,
            labels,
            class_names,
            feature_names,
        })
    }

    /// Convenience constructor with generated feature and class names.
    pub fn from_classes(rows: Vec<Vec<f64>>, labels: Vec<Class>) -> Result<Dataset> {
        let p = rows.first().map_or(0, Vec::len);
        let names = (1..=p).map(|j| format!("x{j}")).collect();
        Dataset::from_rows(rows, labels, ClassNames::default(), names)
    }

    pub(crate) fn from_flat(
        features: Vec<f64>,
        n_features: usize,
        labels: Vec<Class>,
        class_names: ClassNames,
        feature_names: Vec<String>,
    ) -> Dataset {
        debug_assert_eq!(features.len(), labels.len() * n_features);
        Dataset {
            features,
            n_features,
            labels,
            class_names,
            feature_names,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn p(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.n_features)
    }

    /// Row-major feature storage.
    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> &[Class] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Class {
        self.labels[i]
    }

    pub fn class_names(&self) -> &ClassNames {
        &self.class_names
    }

    pub fn minority_label(&self) -> &str {
        &self.class_names.minority
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn count(&self, class: Class) -> usize {
        self.labels.iter().filter(|&&c| c == class).count()
    }

    pub fn indices_of(&self, class: Class) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.labels[i] == class).collect()
    }

    /// A new dataset holding `indices` in the given order (repeats allowed).
    pub fn select(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        for &i in indices {
            features.extend_from_slice(self.row(i));
        }
        Dataset::from_flat(
            features,
            self.n_features,
            indices.iter().map(|&i| self.labels[i]).collect(),
            self.class_names.clone(),
            self.feature_names.clone(),
        )
    }

    /// A copy with `rows` appended, all labelled `class`.
    pub(crate) fn with_appended(&self, rows: &[f64], class: Class) -> Dataset {
        debug_assert_eq!(rows.len() % self.n_features, 0);
        let mut out = self.clone();
        out.features.extend_from_slice(rows);
        out.labels
            .extend(std::iter::repeat_n(class, rows.len() / self.n_features));
        out
    }

    /// Per-column (min, max).
    pub fn column_ranges(&self) -> Vec<(f64, f64)> {
        let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); self.n_features];
        for row in self.rows() {
            for (r, &v) in ranges.iter_mut().zip(row) {
                r.0 = r.0.min(v);
                r.1 = r.1.max(v);
            }
        }
        ranges
    }

    /// Feature matrix with each column mapped affinely onto [0, 1];
    /// constant columns map to 0.5.
    pub fn normalized_features(&self) -> Vec<f64> {
        let ranges = self.column_ranges();
        let mut out = Vec::with_capacity(self.features.len());
        for row in self.rows() {
            for (&v, &(lo, hi)) in row.iter().zip(&ranges) {
                out.push(if hi > lo { (v - lo) / (hi - lo) } else { 0.5 });
            }
        }
        out
    }

    /// Writes the dataset as CSV with the label as the final column and
    /// features at 12 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = self.feature_names.clone();
        header.push("class".into());
        wtr.write_record(&header)?;
        for (row, &label) in self.rows().zip(&self.labels) {
            let mut rec: Vec<String> = row.iter().map(|&v| crate::num::fmt_sig(v)).collect();
            rec.push(self.class_names.name(label).to_string());
            wtr.write_record(&rec)?;
        }
        wtr.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Min-max normalisation of every feature column onto [0, 1]. Constant
/// columns map to 0.5.
pub fn min_max_normalize(d: &Dataset) -> Dataset {
    Dataset::from_flat(
        d.normalized_features(),
        d.n_features,
        d.labels.clone(),
        d.class_names.clone(),
        d.feature_names.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(values: &[f64]) -> Dataset {
        let labels = (0..values.len())
            .map(|i| if i == 0 { Class::Minority } else { Class::Majority })
            .collect();
        Dataset::from_classes(values.iter().map(|&v| vec![v]).collect(), labels).unwrap()
    }

    #[test]
    fn normalizes_columns() {
        let d = min_max_normalize(&col(&[0.0, 5.0, 10.0]));
        assert_eq!(d.features(), &[0.0, 0.5, 1.0]);
        let d = min_max_normalize(&col(&[7.0, 7.0, 7.0]));
        assert_eq!(d.features(), &[0.5, 0.5, 0.5]);
    }

    #[test]
    fn normalize_is_idempotent() {
        let d = col(&[3.0, -1.5, 2.25, 9.0, 9.0]);
        let once = min_max_normalize(&d);
        assert_eq!(min_max_normalize(&once), once);
    }

    #[test]
    fn minority_autodetect_and_ties() {
        let rows = vec![vec![0.0]; 4];
        let d = Dataset::new(
            rows.clone(),
            ["a", "a", "a", "b"].map(String::from).to_vec(),
            None,
            vec!["x".into()],
        )
        .unwrap();
        assert_eq!(d.minority_label(), "b");
        assert_eq!(d.count(Class::Minority), 1);

        let d = Dataset::new(
            rows,
            ["z", "y", "z", "y"].map(String::from).to_vec(),
            None,
            vec!["x".into()],
        )
        .unwrap();
        assert_eq!(d.minority_label(), "y");
    }

    #[test]
    fn rejects_three_classes_and_bad_minority() {
        let rows = vec![vec![0.0]; 3];
        let err = Dataset::new(
            rows.clone(),
            ["a", "b", "c"].map(String::from).to_vec(),
            None,
            vec!["x".into()],
        )
        .unwrap_err();
        assert!(err.to_string().contains("more than two classes"));

        let err = Dataset::new(
            rows,
            ["a", "a", "b"].map(String::from).to_vec(),
            Some("a"),
            vec!["x".into()],
        )
        .unwrap_err();
        assert!(matches!(err, Error::MinorityNotRarer { .. }));
    }

    #[test]
    fn select_keeps_order_and_repeats() {
        let d = col(&[1.0, 2.0, 3.0]);
        let s = d.select(&[2, 0, 2]);
        assert_eq!(s.features(), &[3.0, 1.0, 3.0]);
        assert_eq!(s.labels()[1], Class::Minority);
    }
}
