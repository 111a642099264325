//! Nearest-neighbour based undersampling: CNN, ENN, Tomek links and OSS.
//!
//! All distances are Euclidean over the min-max normalisation of the
//! dataset handed to the method.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Resampled, ResampleConfig, StrategyId};
use crate::data::{Class, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::{vote, NeighborIndex};
use crate::seed;

fn classify_against(idx: &NeighborIndex, i: usize, members: &[usize], k: usize) -> Result<Class> {
    let nn = idx.knn_among(idx.point(i), k.min(members.len()), None, members.iter().copied())?;
    Ok(vote(nn.iter().map(|n| idx.label(n.index))))
}

/// Condensed nearest neighbour adapted to imbalance: the store starts with
/// every minority row plus one random majority row, and the remaining
/// majority rows are scanned in a random order.
pub fn cnn(d: &Dataset, cfg: &ResampleConfig) -> Result<Resampled> {
    let majority = d.indices_of(Class::Majority);
    if majority.is_empty() || d.count(Class::Minority) == 0 {
        return Ok(Resampled::unchanged(d, "CNN skipped: a class is empty".into()));
    }
    let mut rng = seed::stream(cfg.seed, &[StrategyId::Cnn.tag()]);
    let seed_member = majority[rng.random_range(0..majority.len())];
    let mut order: Vec<usize> = majority.into_iter().filter(|&i| i != seed_member).collect();
    order.shuffle(&mut rng);
    cnn_with(d, seed_member, &order, cfg.k_cnn)
}

/// CNN with an explicit seed row and scan order. Rows misclassified by the
/// `k`-NN rule over the current store join it immediately; passes repeat
/// until one adds nothing.
pub fn cnn_with(d: &Dataset, seed_member: usize, scan_order: &[usize], k: usize) -> Result<Resampled> {
    let idx = NeighborIndex::from_dataset(d)?;
    let mut store = d.indices_of(Class::Minority);
    store.push(seed_member);
    let mut in_store = vec![false; d.n()];
    for &i in &store {
        in_store[i] = true;
    }
    loop {
        let mut added = false;
        for &i in scan_order {
            if in_store[i] {
                continue;
            }
            if classify_against(&idx, i, &store, k)? != d.label(i) {
                store.push(i);
                in_store[i] = true;
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    Ok(Resampled::keep(d, store))
}

/// Wilson's edited nearest neighbour: every row is classified by its
/// `k_enn` nearest other rows, decisions are taken on the original data and
/// applied together. Standalone use removes misclassified majority rows
/// only; `clean_both_classes` removes misclassified rows of either class.
pub fn enn(d: &Dataset, cfg: &ResampleConfig, clean_both_classes: bool) -> Result<Resampled> {
    let k = cfg.k_enn;
    if k == 0 || d.n() < k + 1 {
        return Err(Error::InvalidConfig(format!(
            "ENN with k = {k} needs at least {} rows, got {}",
            k + 1,
            d.n()
        )));
    }
    let idx = NeighborIndex::from_dataset(d)?;
    let mut keep = Vec::with_capacity(d.n());
    for i in 0..d.n() {
        let label = d.label(i);
        let wrong = idx.classify_member(i, k)? != label;
        if !(wrong && (clean_both_classes || label == Class::Majority)) {
            keep.push(i);
        }
    }
    Ok(Resampled::keep(d, keep))
}

/// Tomek links among `members`: cross-class pairs at a distance no other
/// member undercuts for either endpoint. Returned as `(u, v)` with `u < v`,
/// sorted.
fn links_within(idx: &NeighborIndex, members: &[usize]) -> Vec<(usize, usize)> {
    let nearest: Vec<f64> = members
        .iter()
        .map(|&a| {
            members
                .iter()
                .filter(|&&b| b != a)
                .map(|&b| idx.sq_dist(a, b))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut links = Vec::new();
    for (pa, &a) in members.iter().enumerate() {
        for (pb, &b) in members.iter().enumerate().skip(pa + 1) {
            if idx.label(a) == idx.label(b) {
                continue;
            }
            let d2 = idx.sq_dist(a, b);
            if d2 <= nearest[pa] && d2 <= nearest[pb] {
                links.push((a.min(b), a.max(b)));
            }
        }
    }
    links.sort_unstable();
    links
}

/// All Tomek links of `d` as sorted index pairs.
pub fn tomek_links(d: &Dataset) -> Result<Vec<(usize, usize)>> {
    let idx = NeighborIndex::from_dataset(d)?;
    let all: Vec<usize> = (0..d.n()).collect();
    Ok(links_within(&idx, &all))
}

/// Removes Tomek-linked rows in one pass: only the majority member of each
/// link, or both members when `remove_both`.
pub fn tl(d: &Dataset, remove_both: bool) -> Result<Resampled> {
    let mut drop = vec![false; d.n()];
    for (a, b) in tomek_links(d)? {
        for i in [a, b] {
            if remove_both || d.label(i) == Class::Majority {
                drop[i] = true;
            }
        }
    }
    Ok(Resampled::keep(d, (0..d.n()).filter(|&i| !drop[i]).collect()))
}

/// One-sided selection with a randomly chosen majority seed row.
pub fn oss(d: &Dataset, cfg: &ResampleConfig) -> Result<Resampled> {
    let majority = d.indices_of(Class::Majority);
    if majority.is_empty() || d.count(Class::Minority) == 0 {
        return Ok(Resampled::unchanged(d, "OSS skipped: a class is empty".into()));
    }
    let mut rng = seed::stream(cfg.seed, &[StrategyId::Oss.tag()]);
    oss_with(d, majority[rng.random_range(0..majority.len())])
}

/// One-sided selection from a given majority seed row: the store holds all
/// minority rows plus the seed; remaining majority rows misclassified by
/// 1-NN over that fixed store are added in a single pass; finally majority
/// members of Tomek links inside the store are removed.
pub fn oss_with(d: &Dataset, seed_member: usize) -> Result<Resampled> {
    let idx = NeighborIndex::from_dataset(d)?;
    let mut store = d.indices_of(Class::Minority);
    store.push(seed_member);
    let misclassified: Vec<usize> = d
        .indices_of(Class::Majority)
        .into_iter()
        .filter(|&i| i != seed_member)
        .filter(|&i| {
            idx.nearest_among(idx.point(i), &store)
                .is_some_and(|nn| idx.label(nn) != Class::Majority)
        })
        .collect();
    store.extend(misclassified);
    store.sort_unstable();

    let mut drop = vec![false; d.n()];
    for (a, b) in links_within(&idx, &store) {
        for i in [a, b] {
            if d.label(i) == Class::Majority {
                drop[i] = true;
            }
        }
    }
    Ok(Resampled::keep(d, store.into_iter().filter(|&i| !drop[i]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Class::{Majority as B, Minority as A};

    fn line(xs: &[f64], labels: &[Class]) -> Dataset {
        Dataset::from_classes(xs.iter().map(|&x| vec![x]).collect(), labels.to_vec()).unwrap()
    }

    fn xs(r: &Resampled) -> Vec<f64> {
        r.dataset.features().to_vec()
    }

    #[test]
    fn cnn_hand_simulation() {
        let d = line(&[0.0, 0.1, 5.0, 5.1, 5.2], &[A, A, B, B, B]);
        let out = cnn_with(&d, 2, &[3, 4], 1).unwrap();
        assert_eq!(xs(&out), vec![0.0, 0.1, 5.0]);
        // randomised entry point: whichever seed is picked, nothing else joins
        let out = cnn(&d, &ResampleConfig::default()).unwrap();
        assert_eq!(out.dataset.n(), 3);
    }

    #[test]
    fn cnn_absorbs_misclassified_rows() {
        // 1.0 is nearer to the minority at 0.9 than to the seed at 10
        let d = line(&[0.0, 0.9, 1.0, 10.0, 11.0], &[A, A, B, B, B]);
        let out = cnn_with(&d, 3, &[4, 2], 1).unwrap();
        assert_eq!(out.kept_indices(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn enn_examples() {
        let d = line(&[0.0, 0.1, 0.2, 5.0], &[B, B, B, A]);
        let cfg = ResampleConfig::default();
        let both = enn(&d, &cfg, true).unwrap();
        assert_eq!(xs(&both), vec![0.0, 0.1, 0.2]);
        // the misclassified row is minority, kept in standalone mode
        let majority_only = enn(&d, &cfg, false).unwrap();
        assert_eq!(majority_only.dataset.n(), 4);

        // majority point surrounded by minority is dropped either way
        let d = line(&[0.0, 0.1, 0.2, 0.15, 9.0], &[A, A, A, B, B]);
        let out = enn(&d, &cfg, false).unwrap();
        assert!(!xs(&out).contains(&0.15));

        assert!(enn(&line(&[0.0, 1.0, 2.0], &[A, B, B]), &cfg, false).is_err());
    }

    #[test]
    fn tomek_examples() {
        let d = line(&[0.0, 1.0, 5.0], &[A, B, B]);
        assert_eq!(tomek_links(&d).unwrap(), vec![(0, 1)]);
        assert_eq!(xs(&tl(&d, false).unwrap()), vec![0.0, 5.0]);
        assert_eq!(xs(&tl(&d, true).unwrap()), vec![5.0]);

        let d = line(&[0.0, 0.1, 5.0, 5.1], &[A, A, B, B]);
        assert!(tomek_links(&d).unwrap().is_empty());
        assert_eq!(tl(&d, false).unwrap().dataset, d);

        let d = line(&[3.0, 3.0, 0.0, 8.0], &[A, B, B, B]);
        assert!(tomek_links(&d).unwrap().contains(&(0, 1)));
    }

    #[test]
    fn oss_discards_redundant_cluster() {
        // minority near 0; majority seed at 5 absorbs the far cluster
        let d = line(&[0.0, 0.2, 5.0, 5.1, 5.2, 0.4], &[A, A, B, B, B, B]);
        let out = oss_with(&d, 2).unwrap();
        // 0.4 is misclassified (nearest is minority 0.2) and joins P, then
        // forms a Tomek link with 0.2 and is removed again.
        assert_eq!(xs(&out), vec![0.0, 0.2, 5.0]);
    }

    #[test]
    fn oss_single_majority() {
        let d = line(&[0.0, 0.1, 0.2, 3.0], &[A, A, A, B]);
        let out = oss(&d, &ResampleConfig::default()).unwrap();
        assert_eq!(out.dataset, d);
        let d = line(&[0.0, 0.1, 0.2, 0.3], &[A, A, A, B]);
        let out = oss(&d, &ResampleConfig::default()).unwrap();
        assert_eq!(xs(&out), vec![0.0, 0.1, 0.2]);
    }
}
