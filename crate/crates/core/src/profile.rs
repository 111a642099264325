//! Dataset meta-features: size, dimensionality, imbalance ratio, borderline
//! percentage (MST cross edges) and class overlap (maximum Fisher ratio).

use serde::{Deserialize, Serialize};

use crate::data::{Class, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::{build_mst, NeighborIndex};
use crate::num;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub n_instances: usize,
    pub n_attributes: usize,
    #[serde(with = "num::sig")]
    pub imbalance_ratio: f64,
    #[serde(with = "num::sig")]
    pub borderline_pct: f64,
    #[serde(with = "num::sig")]
    pub overlap_pct: f64,
    pub minority_label: String,
}

/// Majority count over minority count.
pub fn imbalance_ratio(d: &Dataset) -> Result<f64> {
    let (min, maj) = (d.count(Class::Minority), d.count(Class::Majority));
    if min == 0 || maj == 0 {
        return Err(Error::NotBinary(usize::from(min > 0) + usize::from(maj > 0)));
    }
    Ok(maj as f64 / min as f64)
}

struct ClassMoments {
    mean: f64,
    var: f64,
}

fn moments(values: impl Iterator<Item = f64> + Clone) -> ClassMoments {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    // a single observation carries no spread
    let var = if n < 2.0 {
        0.0
    } else {
        values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    };
    ClassMoments { mean, var }
}

/// Fisher discriminant ratio of every feature, `None` for features where
/// both classes are constant at the same value. Variances use the n−1
/// denominator; a class with a single row counts as zero-variance.
pub fn fisher_ratios(d: &Dataset) -> Result<Vec<Option<f64>>> {
    imbalance_ratio(d)?;
    let x = d.normalized_features();
    let p = d.p();
    let labels = d.labels();
    let x = &x;
    let column = |j: usize, class: Class| {
        labels
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == class)
            .map(move |(i, _)| x[i * p + j])
    };
    Ok((0..p)
        .map(|j| {
            let a = moments(column(j, Class::Minority));
            let b = moments(column(j, Class::Majority));
            let num = (a.mean - b.mean) * (a.mean - b.mean);
            let den = a.var + b.var;
            if den > 0.0 {
                Some(num / den)
            } else if num > 0.0 {
                Some(f64::INFINITY)
            } else {
                None
            }
        })
        .collect())
}

/// Overlap percentage `100 / (1 + max_f r_f)` from the per-feature Fisher
/// ratios `r_f = (μ₁ − μ₂)² / (σ₁² + σ₂²)`. Fully separable features give 0,
/// identically distributed classes give 100.
pub fn overlap_pct(d: &Dataset) -> Result<f64> {
    let max = fisher_ratios(d)?
        .into_iter()
        .flatten()
        .reduce(f64::max)
        .ok_or_else(|| Error::Degenerate("every feature is constant in both classes".into()))?;
    Ok(100.0 / (1.0 + max))
}

/// Percentage of points incident to an MST edge joining different classes.
pub fn borderline_pct(d: &Dataset) -> Result<f64> {
    let idx = NeighborIndex::from_dataset(d)?;
    let mst = build_mst(&idx)?;
    let mut marked = vec![false; d.n()];
    for e in mst {
        if d.label(e.u) != d.label(e.v) {
            marked[e.u] = true;
            marked[e.v] = true;
        }
    }
    Ok(100.0 * marked.iter().filter(|&&m| m).count() as f64 / d.n() as f64)
}

pub fn profile(d: &Dataset) -> Result<Profile> {
    Ok(Profile {
        n_instances: d.n(),
        n_attributes: d.p(),
        imbalance_ratio: imbalance_ratio(d)?,
        borderline_pct: borderline_pct(d)?,
        overlap_pct: overlap_pct(d)?,
        minority_label: d.minority_label().to_string(),
    })
}

impl Profile {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema_version: u32,
            kind: &'static str,
            #[serde(flatten)]
            profile: &'a Profile,
        }
        serde_json::to_string_pretty(&Doc {
            schema_version: 1,
            kind: "profile",
            profile: self,
        })
        .expect("profile serialises")
    }

    pub fn from_json(text: &str) -> Result<Profile> {
        #[derive(Deserialize)]
        struct Doc {
            kind: Option<String>,
            #[serde(flatten)]
            profile: Profile,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        match doc.kind.as_deref() {
            None | Some("profile") => Ok(doc.profile),
            Some(other) => Err(Error::Document(format!("expected a profile, found {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Class::{Majority as B, Minority as A};

    fn line(xs: &[f64], labels: &[Class]) -> Dataset {
        Dataset::from_classes(xs.iter().map(|&x| vec![x]).collect(), labels.to_vec()).unwrap()
    }

    #[test]
    fn ir_examples() {
        let d = line(&[0.0, 1.0, 2.0, 3.0], &[A, A, B, B]);
        assert_eq!(imbalance_ratio(&d).unwrap(), 1.0);
        let mut labels = vec![A; 10];
        labels.extend(vec![B; 300]);
        let xs: Vec<f64> = (0..310).map(f64::from).collect();
        assert_eq!(imbalance_ratio(&line(&xs, &labels)).unwrap(), 30.0);
    }

    #[test]
    fn identical_distributions_overlap_fully() {
        let d = line(&[0.0, 1.0, 0.0, 1.0], &[A, A, B, B]);
        assert_eq!(overlap_pct(&d).unwrap(), 100.0);
    }

    #[test]
    fn fisher_ratio_arithmetic() {
        // means 0 and 10, sample variances 0.5 each -> r = 100
        let d = line(&[-0.5, 0.5, 9.5, 10.5], &[A, A, B, B]);
        let r = fisher_ratios(&d).unwrap()[0].unwrap();
        assert!((r - 100.0).abs() < 1e-9);
        assert!((overlap_pct(&d).unwrap() - 100.0 / 101.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_features() {
        // classes constant at different values: infinite ratio, overlap 0
        let d = line(&[0.0, 0.0, 1.0, 1.0], &[A, A, B, B]);
        assert_eq!(overlap_pct(&d).unwrap(), 0.0);
        // constant everywhere: skipped, nothing left
        let d = line(&[3.0, 3.0, 3.0, 3.0], &[A, A, B, B]);
        assert!(matches!(overlap_pct(&d), Err(Error::Degenerate(_))));
        // single-class data
        let d = line(&[0.0, 1.0, 2.0], &[B, B, B]);
        assert!(overlap_pct(&d).is_err());
    }

    #[test]
    fn borderline_examples() {
        let d = line(&[0.0, 0.1, 5.0, 5.1], &[A, A, B, B]);
        assert_eq!(borderline_pct(&d).unwrap(), 50.0);
        let d = line(&[0.0, 1.0, 2.0, 3.0], &[A, B, A, B]);
        assert_eq!(borderline_pct(&d).unwrap(), 100.0);
    }

    #[test]
    fn two_point_profile() {
        let d = Dataset::from_classes(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![A, B]).unwrap();
        assert_eq!(imbalance_ratio(&d).unwrap(), 1.0);
        assert_eq!(borderline_pct(&d).unwrap(), 100.0);
        let p = profile(&d).unwrap();
        assert_eq!((p.n_instances, p.n_attributes), (2, 2));
        assert_eq!(p.overlap_pct, 0.0);
    }

    #[test]
    fn json_roundtrip() {
        let p = Profile {
            n_instances: 336,
            n_attributes: 7,
            imbalance_ratio: 8.6,
            borderline_pct: 14.0,
            overlap_pct: 45.0,
            minority_label: "positive".into(),
        };
        let back = Profile::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }
}
