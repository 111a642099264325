//! Axis-aligned CART trees split on Gini impurity decrease.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::data::Class;
use crate::seed::StreamRng;

/// Improvements at or below this are treated as no improvement.
const MIN_DECREASE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Node {
    /// `counts = [minority, majority]` of the training rows reaching it.
    Leaf { counts: [u32; 2] },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf_counts(&self, x: &[f64]) -> [u32; 2] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { counts } => return *counts,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    /// Hard vote of the leaf reached by `x`; a tied leaf votes minority.
    pub fn vote(&self, x: &[f64]) -> Class {
        let [min, maj] = self.leaf_counts(x);
        if min >= maj {
            Class::Minority
        } else {
            Class::Majority
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left).max(go(nodes, *right)),
            }
        }
        go(&self.nodes, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    /// Parent Gini minus the size-weighted Gini of the children.
    pub decrease: f64,
}

pub fn gini(counts: [u64; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let (a, b) = (counts[0] as f64 / n, counts[1] as f64 / n);
    1.0 - a * a - b * b
}

fn class_counts(labels: &[Class], rows: &[usize]) -> [u64; 2] {
    let mut c = [0u64; 2];
    for &r in rows {
        c[usize::from(!labels[r].is_minority())] += 1;
    }
    c
}

fn midpoint(a: f64, b: f64) -> f64 {
    let mid = a + (b - a) / 2.0;
    if mid < b {
        mid
    } else {
        a
    }
}

/// Best Gini split of `rows` over `features` (row-major `x` with `p`
/// columns). Thresholds are midpoints between adjacent distinct values.
/// Equal decreases keep the earlier feature in `features`, then the
/// smaller threshold. `None` when nothing beats the parent impurity.
pub fn best_split(
    x: &[f64],
    p: usize,
    labels: &[Class],
    rows: &[usize],
    features: &[usize],
) -> Option<Split> {
    let total = class_counts(labels, rows);
    let n = rows.len() as f64;
    let parent = gini(total);
    let mut best: Option<Split> = None;
    let mut sorted = rows.to_vec();
    for &f in features {
        sorted.sort_by(|&a, &b| x[a * p + f].total_cmp(&x[b * p + f]));
        let mut left = [0u64; 2];
        for w in 0..sorted.len() - 1 {
            let r = sorted[w];
            left[usize::from(!labels[r].is_minority())] += 1;
            let (lo, hi) = (x[r * p + f], x[sorted[w + 1] * p + f]);
            if lo == hi {
                continue;
            }
            let right = [total[0] - left[0], total[1] - left[1]];
            let nl = (w + 1) as f64;
            let child = nl / n * gini(left) + (n - nl) / n * gini(right);
            let decrease = parent - child;
            if best.is_none_or(|b| decrease > b.decrease) {
                best = Some(Split {
                    feature: f,
                    threshold: midpoint(lo, hi),
                    decrease,
                });
            }
        }
    }
    best.filter(|b| b.decrease > MIN_DECREASE)
}

pub(crate) struct GrowParams {
    pub mtry: usize,
    pub max_depth: Option<usize>,
    pub min_split: usize,
}

/// Grows one tree on `rows` (repeats allowed, e.g. a bootstrap sample).
pub(crate) fn grow(
    x: &[f64],
    p: usize,
    labels: &[Class],
    rows: Vec<usize>,
    params: &GrowParams,
    rng: &mut StreamRng,
) -> Tree {
    let mut nodes = vec![Node::Leaf { counts: [0, 0] }];
    let mut stack = vec![(0usize, rows, 0usize)];
    while let Some((at, rows, depth)) = stack.pop() {
        let counts = class_counts(labels, &rows);
        let leaf = Node::Leaf {
            counts: [counts[0] as u32, counts[1] as u32],
        };
        let stop = counts[0] == 0
            || counts[1] == 0
            || rows.len() < params.min_split
            || params.max_depth.is_some_and(|m| depth >= m);
        if stop {
            nodes[at] = leaf;
            continue;
        }
        let mut features = sample(rng, p, params.mtry.min(p)).into_vec();
        features.sort_unstable();
        let Some(split) = best_split(x, p, labels, &rows, &features) else {
            nodes[at] = leaf;
            continue;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&i| x[i * p + split.feature] <= split.threshold);
        let (li, ri) = (nodes.len(), nodes.len() + 1);
        nodes.push(Node::Leaf { counts: [0, 0] });
        nodes.push(Node::Leaf { counts: [0, 0] });
        nodes[at] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: li,
            right: ri,
        };
        stack.push((ri, r, depth + 1));
        stack.push((li, l, depth + 1));
    }
    Tree { nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Class::{Majority as B, Minority as A};

    #[test]
    fn gini_values() {
        assert_eq!(gini([5, 0]), 0.0);
        assert_eq!(gini([2, 2]), 0.5);
    }

    #[test]
    fn separable_line_splits_at_midpoint() {
        let x = [0.1, 0.2, 0.3, 0.7, 0.8];
        let labels = [A, A, A, B, B];
        let s = best_split(&x, 1, &labels, &[0, 1, 2, 3, 4], &[0]).unwrap();
        assert_eq!(s.feature, 0);
        assert!((s.threshold - 0.5).abs() < 1e-12);
        assert!((s.decrease - gini([3, 2])).abs() < 1e-12);
    }

    #[test]
    fn no_split_on_constant_feature() {
        let x = [1.0, 1.0, 1.0];
        assert!(best_split(&x, 1, &[A, B, A], &[0, 1, 2], &[0]).is_none());
    }

    #[test]
    fn adjacent_floats_keep_a_valid_threshold() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let t = midpoint(a, b);
        assert!(a <= t && t < b);
    }
}
