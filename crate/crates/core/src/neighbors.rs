//! Exact Euclidean nearest-neighbour search and minimum spanning trees.
//!
//! Everything here is brute force: O(n) per query and O(n²) for the MST.
//! Distances are compared as squared Euclidean distances; ties are broken
//! by the smaller point index so every result is deterministic.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::data::{Class, Dataset};
use crate::error::{Error, Result};

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// Immutable point set with class labels. Build it over normalised
/// features; [`NeighborIndex::from_dataset`] does that for you.
#[derive(Clone, Debug)]
pub struct NeighborIndex {
    points: Vec<f64>,
    p: usize,
    labels: Vec<Class>,
}

impl NeighborIndex {
    pub fn new(points: Vec<f64>, p: usize, labels: Vec<Class>) -> Result<Self> {
        if p == 0 || points.len() != labels.len() * p {
            return Err(Error::InvalidConfig(format!(
                "{} coordinates do not form {} points of dimension {p}",
                points.len(),
                labels.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(NeighborIndex { points, p, labels })
    }

    /// Index over the min-max normalised features of `d`.
    pub fn from_dataset(d: &Dataset) -> Result<Self> {
        Self::new(d.normalized_features(), d.p(), d.labels().to_vec())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.p..(i + 1) * self.p]
    }

    pub fn label(&self, i: usize) -> Class {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Class] {
        &self.labels
    }

    pub fn sq_dist(&self, i: usize, j: usize) -> f64 {
        squared_distance(self.point(i), self.point(j))
    }

    /// The `k` stored points closest to `q`, nearest first. `exclude` names a
    /// stored index to skip, used when `q` is itself a member.
    pub fn knn_query(&self, q: &[f64], k: usize, exclude: Option<usize>) -> Result<Vec<Neighbor>> {
        self.knn_among(q, k, exclude, 0..self.len())
    }

    /// As [`knn_query`](Self::knn_query) but restricted to `candidates`.
    pub fn knn_among(
        &self,
        q: &[f64],
        k: usize,
        exclude: Option<usize>,
        candidates: impl IntoIterator<Item = usize>,
    ) -> Result<Vec<Neighbor>> {
        if k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        let mut scored: Vec<(f64, usize)> = candidates
            .into_iter()
            .filter(|&i| Some(i) != exclude)
            .map(|i| (squared_distance(q, self.point(i)), i))
            .collect();
        if k > scored.len() {
            return Err(Error::InvalidConfig(format!(
                "k = {k} exceeds the {} available candidates",
                scored.len()
            )));
        }
        if k < scored.len() {
            scored.select_nth_unstable_by(k - 1, by_distance_then_index);
            scored.truncate(k);
        }
        scored.sort_unstable_by(by_distance_then_index);
        Ok(scored
            .into_iter()
            .map(|(d2, index)| Neighbor {
                index,
                distance: d2.sqrt(),
            })
            .collect())
    }

    /// Nearest member of `candidates` to `q` (ties to the smaller index).
    pub fn nearest_among(&self, q: &[f64], candidates: &[usize]) -> Option<usize> {
        candidates
            .iter()
            .map(|&i| (squared_distance(q, self.point(i)), i))
            .min_by(by_distance_then_index)
            .map(|(_, i)| i)
    }

    /// Majority vote of the `k` nearest stored points; a split vote goes to
    /// the minority class. `k` is capped at the number of candidates.
    pub fn knn_classify(&self, q: &[f64], k: usize, exclude: Option<usize>) -> Result<Class> {
        let available = self.len() - usize::from(exclude.is_some_and(|e| e < self.len()));
        if available == 0 {
            return Err(Error::EmptyDataset);
        }
        let nn = self.knn_query(q, k.min(available), exclude)?;
        Ok(vote(nn.iter().map(|n| self.labels[n.index])))
    }

    /// Classifies stored point `i` by its `k` nearest other points.
    pub fn classify_member(&self, i: usize, k: usize) -> Result<Class> {
        self.knn_classify(self.point(i), k, Some(i))
    }
}

/// Majority label with ties resolved to the minority class.
pub fn vote(labels: impl IntoIterator<Item = Class>) -> Class {
    let (mut min, mut maj) = (0usize, 0usize);
    for l in labels {
        match l {
            Class::Minority => min += 1,
            Class::Majority => maj += 1,
        }
    }
    if min >= maj {
        Class::Minority
    } else {
        Class::Majority
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MstEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Euclidean minimum spanning tree (dense Prim, O(n²)).
///
/// Edges are totally ordered by (squared weight, smaller endpoint, larger
/// endpoint), which makes the tree unique even with tied weights. The
/// result has `u < v` and is sorted by `(u, v)`.
pub fn build_mst(idx: &NeighborIndex) -> Result<Vec<MstEdge>> {
    let n = idx.len();
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "a spanning tree needs at least 2 points, got {n}"
        )));
    }
    type Key = (f64, usize, usize);
    let less = |a: &Key, b: &Key| {
        a.0.total_cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
            == Ordering::Less
    };

    let mut in_tree = vec![false; n];
    let mut best: Vec<Key> = vec![(f64::INFINITY, usize::MAX, usize::MAX); n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let pc = idx.point(current);
        let mut next: Option<usize> = None;
        for w in 0..n {
            if in_tree[w] {
                continue;
            }
            let cand = (
                squared_distance(pc, idx.point(w)),
                current.min(w),
                current.max(w),
            );
            if less(&cand, &best[w]) {
                best[w] = cand;
            }
            if next.is_none_or(|b| less(&best[w], &best[b])) {
                next = Some(w);
            }
        }
        let w = next.expect("vertices remain");
        let (d2, u, v) = best[w];
        edges.push(MstEdge {
            u,
            v,
            weight: d2.sqrt(),
        });
        in_tree[w] = true;
        current = w;
    }
    edges.sort_by_key(|e| (e.u, e.v));
    Ok(edges)
}
