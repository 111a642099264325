use rand::Rng;

use super::{Resampled, ResampleConfig, StrategyId};
use crate::data::{Class, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::NeighborIndex;
use crate::seed;

/// SMOTE oversampling.
///
/// Every minority row `x` spawns `⌊perc_over/100⌋` synthetic rows
/// `x + u·(nn − x)`, with `u ~ U[0, 1)` and `nn` drawn uniformly from the
/// `min(k_smote, n_min − 1)` nearest minority neighbours of `x`.
/// Neighbours are found on min-max normalised features (normalised over
/// the whole input); interpolation happens on the raw values.
pub fn smote(d: &Dataset, cfg: &ResampleConfig) -> Result<Resampled> {
    let minority = d.indices_of(Class::Minority);
    if minority.len() < 2 {
        return Err(Error::InsufficientClass {
            class: format!("{} (SMOTE needs 2 minority rows; use ROS instead)", d.minority_label()),
            count: minority.len(),
            needed: 2,
        });
    }
    if cfg.k_smote == 0 {
        return Err(Error::InvalidConfig("k_smote must be at least 1".into()));
    }
    let p = d.p();
    let normalized = d.normalized_features();
    let mut min_points = Vec::with_capacity(minority.len() * p);
    for &i in &minority {
        min_points.extend_from_slice(&normalized[i * p..(i + 1) * p]);
    }
    let index = NeighborIndex::new(min_points, p, vec![Class::Minority; minority.len()])?;
    let k = cfg.k_smote.min(minority.len() - 1);
    let per_row = (cfg.perc_over / 100) as usize;

    let mut rng = seed::stream(cfg.seed, &[StrategyId::Smote.tag()]);
    let mut synthetic = Vec::with_capacity(minority.len() * per_row * p);
    for (pos, &i) in minority.iter().enumerate() {
        let neighbours = index.knn_query(index.point(pos), k, Some(pos))?;
        let x = d.row(i);
        for _ in 0..per_row {
            let nn = d.row(minority[neighbours[rng.random_range(0..k)].index]);
            let u: f64 = rng.random();
            synthetic.extend(x.iter().zip(nn).map(|(a, b)| a + u * (b - a)));
        }
    }

    let added = synthetic.len() / p;
    let mut origin: Vec<Option<usize>> = (0..d.n()).map(Some).collect();
    origin.extend(std::iter::repeat_n(None, added));
    Ok(Resampled {
        dataset: d.with_appended(&synthetic, Class::Minority),
        origin,
        warning: (per_row == 0).then(|| "SMOTE: perc_over < 100 adds nothing".to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Class::{Majority as B, Minority as A};

    #[test]
    fn two_point_segment() {
        let d = Dataset::from_classes(
            vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![5.0, 5.0], vec![6.0, 6.0], vec![7.0, 7.0]],
            vec![A, A, B, B, B],
        )
        .unwrap();
        let out = smote(&d, &ResampleConfig { perc_over: 100, ..Default::default() }).unwrap();
        assert_eq!(out.synthetic_count(), 2);
        // source (0,0) may only interpolate towards (1,1) and vice versa
        for i in d.n()..out.dataset.n() {
            let r = out.dataset.row(i);
            assert_eq!(r[0], r[1]);
            assert!((0.0..=1.0).contains(&r[0]));
        }
    }

    #[test]
    fn count_law() {
        let rows: Vec<Vec<f64>> = (0..27).map(|i| vec![i as f64, (i % 5) as f64]).collect();
        let labels = (0..27).map(|i| if i < 7 { A } else { B }).collect();
        let d = Dataset::from_classes(rows, labels).unwrap();
        let out = smote(&d, &ResampleConfig::default()).unwrap();
        assert_eq!(out.synthetic_count(), 35);
        assert_eq!(out.dataset.count(A), 42);
    }

    #[test]
    fn duplicates_give_duplicates() {
        let d = Dataset::from_classes(
            vec![vec![2.0, 3.0], vec![2.0, 3.0], vec![0.0, 0.0], vec![9.0, 9.0]],
            vec![A, A, B, B],
        )
        .unwrap();
        let out = smote(&d, &ResampleConfig::default()).unwrap();
        for i in d.n()..out.dataset.n() {
            assert_eq!(out.dataset.row(i), &[2.0, 3.0]);
        }
    }

    #[test]
    fn needs_two_minority_rows() {
        let d = Dataset::from_classes(vec![vec![0.0], vec![1.0], vec![2.0]], vec![A, B, B]).unwrap();
        let err = smote(&d, &ResampleConfig::default()).unwrap_err();
        assert!(err.to_string().contains("ROS"), "{err}");
    }
}
