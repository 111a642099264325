//! Random forest of bagged CART trees with per-split feature subsampling.

mod cart;

pub use cart::{best_split, gini, Node, Split, Tree};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Class, Dataset};
use crate::error::{Error, Result};
use crate::seed;
use cart::GrowParams;

const TREE_TAG: u64 = 0x7EE;
const MODEL_SCHEMA: &str = "rebalance-forest/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mtry {
    /// `max(1, ⌊√p⌋)`
    Auto,
    Fixed(usize),
}

impl Mtry {
    pub fn resolve(self, p: usize) -> usize {
        match self {
            Mtry::Auto => ((p as f64).sqrt().floor() as usize).max(1),
            Mtry::Fixed(m) => m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub mtry: Mtry,
    pub max_depth: Option<usize>,
    pub min_split: usize,
    pub seed: u64,
    /// Candidate `mtry` values scored by out-of-bag accuracy. Overrides `mtry`.
    pub mtry_grid: Option<Vec<usize>>,
    /// Test hook: grow every tree on the full training set.
    #[serde(default = "yes")]
    pub bootstrap: bool,
}

fn yes() -> bool {
    true
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 100,
            mtry: Mtry::Auto,
            max_depth: None,
            min_split: 2,
            seed: 0,
            mtry_grid: None,
            bootstrap: true,
        }
    }
}

impl ForestConfig {
    /// The default search grid `1..=min(7, p)`.
    pub fn default_grid(p: usize) -> Vec<usize> {
        (1..=p.clamp(1, 7)).collect()
    }

    fn validate(&self, p: usize) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::InvalidConfig("n_trees must be at least 1".into()));
        }
        if self.min_split < 2 {
            return Err(Error::InvalidConfig("min_split must be at least 2".into()));
        }
        let check = |m: usize| {
            if m == 0 || m > p {
                Err(Error::InvalidConfig(format!("mtry {m} outside 1..={p}")))
            } else {
                Ok(())
            }
        };
        match &self.mtry_grid {
            Some(grid) if grid.is_empty() => Err(Error::InvalidConfig("empty mtry grid".into())),
            Some(grid) => grid.iter().try_for_each(|&m| check(m)),
            None => check(self.mtry.resolve(p)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<Tree>,
    pub n_features: usize,
    pub classes: crate::data::ClassNames,
    pub mtry: usize,
    #[serde(with = "crate::num::sig_opt")]
    pub oob_estimate: Option<f64>,
    /// Set when training saw a single class; every prediction is that class.
    pub constant: Option<Class>,
}

fn bootstrap_rows(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

fn grow_forest(d: &Dataset, cfg: &ForestConfig, mtry: usize) -> (Vec<Tree>, Option<f64>) {
    let (n, p) = (d.n(), d.p());
    let params = GrowParams {
        mtry,
        max_depth: cfg.max_depth,
        min_split: cfg.min_split,
    };
    let grown: Vec<(Tree, Vec<usize>)> = (0..cfg.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::stream(cfg.seed, &[TREE_TAG, t as u64]);
            let rows = if cfg.bootstrap {
                bootstrap_rows(n, &mut rng)
            } else {
                (0..n).collect()
            };
            let tree = cart::grow(d.features(), p, d.labels(), rows.clone(), &params, &mut rng);
            (tree, rows)
        })
        .collect();
    let oob = cfg.bootstrap.then(|| oob_accuracy(d, &grown)).flatten();
    (grown.into_iter().map(|(t, _)| t).collect(), oob)
}

/// Majority vote of out-of-bag trees per row (tie → minority), scored over
/// rows that were out of bag at least once.
fn oob_accuracy(d: &Dataset, grown: &[(Tree, Vec<usize>)]) -> Option<f64> {
    let n = d.n();
    let mut votes = vec![[0u32; 2]; n];
    let mut in_bag = vec![false; n];
    for (tree, rows) in grown {
        in_bag.iter_mut().for_each(|b| *b = false);
        for &r in rows {
            in_bag[r] = true;
        }
        for i in (0..n).filter(|&i| !in_bag[i]) {
            let v = tree.vote(d.row(i));
            votes[i][usize::from(!v.is_minority())] += 1;
        }
    }
    let (mut scored, mut correct) = (0usize, 0usize);
    for (i, [min, maj]) in votes.into_iter().enumerate() {
        if min + maj == 0 {
            continue;
        }
        scored += 1;
        let pred = if min >= maj { Class::Minority } else { Class::Majority };
        correct += usize::from(pred == d.label(i));
    }
    (scored > 0).then(|| correct as f64 / scored as f64)
}

/// Trains a forest. Single-class data yields a flagged constant model.
pub fn train(d: &Dataset, cfg: &ForestConfig) -> Result<ForestModel> {
    if d.n() == 0 {
        return Err(Error::EmptyDataset);
    }
    let p = d.p();
    cfg.validate(p)?;
    let classes = d.class_names().clone();
    let present: Vec<Class> = [Class::Minority, Class::Majority]
        .into_iter()
        .filter(|&c| d.count(c) > 0)
        .collect();
    if let [only] = present[..] {
        return Ok(ForestModel {
            trees: Vec::new(),
            n_features: p,
            classes,
            mtry: cfg.mtry_grid.as_ref().map_or(cfg.mtry.resolve(p), |g| g[0]),
            oob_estimate: None,
            constant: Some(only),
        });
    }
    let (trees, oob_estimate, mtry) = match &cfg.mtry_grid {
        None => {
            let m = cfg.mtry.resolve(p);
            let (t, oob) = grow_forest(d, cfg, m);
            (t, oob, m)
        }
        Some(grid) => {
            let mut grid = grid.clone();
            grid.sort_unstable();
            grid.dedup();
            let mut best: Option<(Vec<Tree>, Option<f64>, usize)> = None;
            for m in grid {
                let (t, oob) = grow_forest(d, cfg, m);
                let better = match &best {
                    None => true,
                    Some((_, b, _)) => oob.unwrap_or(f64::NEG_INFINITY) > b.unwrap_or(f64::NEG_INFINITY),
                };
                if better {
                    best = Some((t, oob, m));
                }
            }
            best.expect("grid is non-empty")
        }
    };
    Ok(ForestModel {
        trees,
        n_features: p,
        classes,
        mtry,
        oob_estimate,
        constant: None,
    })
}

impl ForestModel {
    /// Minority vote fraction for each row of the row-major matrix `x`.
    pub fn predict_proba_flat(&self, x: &[f64]) -> Result<Vec<f64>> {
        let p = self.n_features;
        if p == 0 || !x.len().is_multiple_of(p) {
            return Err(Error::InvalidConfig(format!(
                "expected rows of {p} features, got {} values",
                x.len()
            )));
        }
        if let Some(c) = self.constant {
            let v = if c.is_minority() { 1.0 } else { 0.0 };
            return Ok(vec![v; x.len() / p]);
        }
        let t = self.trees.len() as f64;
        Ok(x.par_chunks(p)
            .map(|row| {
                let min = self.trees.iter().filter(|tr| tr.vote(row).is_minority()).count();
                min as f64 / t
            })
            .collect())
    }

    pub fn predict_proba(&self, d: &Dataset) -> Result<Vec<f64>> {
        self.check_width(d.p())?;
        self.predict_proba_flat(d.features())
    }

    /// Minority iff the vote fraction is at least one half.
    pub fn predict(&self, d: &Dataset) -> Result<Vec<Class>> {
        Ok(self.predict_proba(d)?.into_iter().map(class_of).collect())
    }

    fn check_width(&self, p: usize) -> Result<()> {
        if p != self.n_features {
            return Err(Error::InvalidConfig(format!(
                "model has {} features, data has {p}",
                self.n_features
            )));
        }
        Ok(())
    }

    pub fn is_degenerate(&self) -> bool {
        self.constant.is_some()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            schema: &'static str,
            #[serde(flatten)]
            model: &'a ForestModel,
        }
        serde_json::to_string_pretty(&Dump {
            schema: MODEL_SCHEMA,
            model: self,
        })
        .expect("model serializes")
    }
}

pub fn class_of(proba: f64) -> Class {
    if proba >= 0.5 {
        Class::Minority
    } else {
        Class::Majority
    }
}
