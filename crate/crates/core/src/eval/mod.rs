//! Repeated stratified cross-validation of resampling strategies, with
//! rank aggregation and the Friedman / Nemenyi analysis on top.

mod stats;

pub use stats::{average_ranks, friedman, nemenyi_cd, nemenyi_q, rank_block, rank_blocks, Friedman};

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{stratified_folds, Dataset};
use crate::error::{Error, Result};
use crate::forest::{self, ForestConfig};
use crate::metrics::{metric_suite, Metric, MetricReport, IBA_ALPHA};
use crate::num::{self, fmt_sig};
use crate::resample::{apply, ResampleConfig, StrategyId};
use crate::seed;

const RESAMPLE_TAG: u64 = 0x7E5A;
const FOREST_TAG: u64 = 0xF0E5;
const SCHEMA_VERSION: u32 = 1;

/// What one ranking block holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockMode {
    /// One block per (metric, repetition), valued by the repetition's fold
    /// mean: N = 8·R.
    #[default]
    MetricRepetition,
    /// One block per metric, valued by the overall mean: N = 8.
    Metric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub k_folds: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub blocks: BlockMode,
    /// Significance level of the critical difference, 0.05 or 0.10.
    pub cd_alpha: f64,
    pub iba_alpha: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            k_folds: 10,
            repetitions: 5,
            seed: 0,
            blocks: BlockMode::default(),
            cd_alpha: 0.05,
            iba_alpha: IBA_ALPHA,
        }
    }
}

/// Outcome of one strategy on one held-out fold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub strategy: StrategyId,
    pub repetition: usize,
    pub fold: usize,
    pub train_size: usize,
    pub resampled_size: usize,
    pub synthetic: usize,
    pub test_size: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub model_note: Option<String>,
    pub metrics: MetricReport,
    /// Original row indices held out, ascending.
    #[serde(skip)]
    pub test_indices: Vec<usize>,
    /// Original row indices copied into the resampled training set.
    #[serde(skip)]
    pub training_sources: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub strategy: StrategyId,
    pub metric: Metric,
    #[serde(with = "num::sig")]
    pub mean: f64,
    #[serde(with = "num::sig")]
    pub std: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyRank {
    pub strategy: StrategyId,
    #[serde(with = "num::sig")]
    pub average_rank: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub kind: String,
    pub n_instances: usize,
    pub n_attributes: usize,
    pub strategies: Vec<StrategyId>,
    pub config: ExperimentConfig,
    pub resample: ResampleConfig,
    pub forest: ForestConfig,
    pub summaries: Vec<MetricSummary>,
    pub n_blocks: usize,
    pub ranks: Vec<StrategyRank>,
    #[serde(with = "num::sig_opt")]
    pub friedman_statistic: Option<f64>,
    #[serde(with = "num::sig_opt")]
    pub friedman_p: Option<f64>,
    #[serde(with = "num::sig_opt")]
    pub nemenyi_cd: Option<f64>,
    pub best_strategy: StrategyId,
    pub folds: Vec<FoldResult>,
}

impl ExperimentReport {
    pub fn summary(&self, strategy: StrategyId, metric: Metric) -> Option<&MetricSummary> {
        self.summaries
            .iter()
            .find(|s| s.strategy == strategy && s.metric == metric)
    }

    pub fn mean(&self, strategy: StrategyId, metric: Metric) -> f64 {
        self.summary(strategy, metric).map_or(f64::NAN, |s| s.mean)
    }

    pub fn average_rank(&self, strategy: StrategyId) -> Option<f64> {
        self.ranks
            .iter()
            .find(|r| r.strategy == strategy)
            .map(|r| r.average_rank)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per (strategy, metric, repetition, fold).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["strategy", "metric", "repetition", "fold", "value"])?;
        for f in &self.folds {
            for m in Metric::ALL {
                out.write_record([
                    f.strategy.name().to_string(),
                    m.name().to_string(),
                    f.repetition.to_string(),
                    f.fold.to_string(),
                    fmt_sig(m.value(&f.metrics)),
                ])?;
            }
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// (repetition, fold, test rows, training rows)
type Split = (usize, usize, Vec<usize>, Vec<usize>);

fn one_fold(
    d: &Dataset,
    strategy: StrategyId,
    split: &Split,
    rcfg: &ResampleConfig,
    fcfg: &ForestConfig,
    exp: &ExperimentConfig,
) -> Result<FoldResult> {
    let (rep, fold, test, train) = (split.0, split.1, &split.2, &split.3);
    let tags = [rep as u64, fold as u64];
    let train_set = d.select(train);
    let rcfg = ResampleConfig {
        seed: seed::derive(exp.seed, &[RESAMPLE_TAG, tags[0], tags[1]]),
        ..rcfg.clone()
    };
    let fcfg = ForestConfig {
        seed: seed::derive(exp.seed, &[FOREST_TAG, tags[0], tags[1]]),
        ..fcfg.clone()
    };
    let resampled = apply(strategy, &train_set, &rcfg)?;
    let model = forest::train(&resampled.dataset, &fcfg)?;
    let test_set = d.select(test);
    let scores = model.predict_proba(&test_set)?;
    let predicted: Vec<_> = scores.iter().map(|&s| forest::class_of(s)).collect();
    let metrics = metric_suite(test_set.labels(), &predicted, &scores, exp.iba_alpha)?;
    let mut training_sources: Vec<usize> = resampled.kept_indices().into_iter().map(|j| train[j]).collect();
    training_sources.sort_unstable();
    training_sources.dedup();
    Ok(FoldResult {
        strategy,
        repetition: rep,
        fold,
        train_size: train.len(),
        resampled_size: resampled.dataset.n(),
        synthetic: resampled.synthetic_count(),
        test_size: test.len(),
        warning: resampled.warning,
        model_note: model
            .is_degenerate()
            .then(|| "training data held a single class; constant model".to_string()),
        metrics,
        test_indices: test.to_vec(),
        training_sources,
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Per-block per-strategy values, strategies in `strategies` order.
pub fn blocks(folds: &[FoldResult], strategies: &[StrategyId], repetitions: usize, mode: BlockMode) -> Vec<Vec<f64>> {
    let mean_of = |s: StrategyId, m: Metric, rep: Option<usize>| {
        let v: Vec<f64> = folds
            .iter()
            .filter(|f| f.strategy == s && rep.is_none_or(|r| f.repetition == r))
            .map(|f| m.value(&f.metrics))
            .collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let mut out = Vec::new();
    for m in Metric::ALL {
        match mode {
            BlockMode::Metric => out.push(strategies.iter().map(|&s| mean_of(s, m, None)).collect()),
            BlockMode::MetricRepetition => {
                for rep in 0..repetitions {
                    out.push(strategies.iter().map(|&s| mean_of(s, m, Some(rep))).collect());
                }
            }
        }
    }
    out
}

/// Runs every strategy on every fold of every repetition. Only the training
/// part of a fold is resampled; the forest is scored on the untouched test
/// part. Resampling and forest seeds depend on (seed, repetition, fold)
/// only, so all strategies see the same forest randomness on a fold.
pub fn run_experiment(
    d: &Dataset,
    strategies: &[StrategyId],
    rcfg: &ResampleConfig,
    fcfg: &ForestConfig,
    exp: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let mut strategies = strategies.to_vec();
    strategies.sort_unstable();
    strategies.dedup();
    if strategies.is_empty() {
        return Err(Error::InvalidConfig("no strategies selected".into()));
    }
    let plan = stratified_folds(d, exp.k_folds, exp.repetitions, exp.seed)?;
    let splits: Vec<Split> = (0..exp.repetitions)
        .flat_map(|rep| (0..exp.k_folds).map(move |fold| (rep, fold)))
        .map(|(rep, fold)| (rep, fold, plan.test_indices(rep, fold), plan.train_indices(rep, fold)))
        .collect();
    let items: Vec<(usize, StrategyId)> = (0..splits.len())
        .flat_map(|i| strategies.iter().map(move |&s| (i, s)))
        .collect();
    let folds: Vec<FoldResult> = items
        .into_par_iter()
        .map(|(i, s)| one_fold(d, s, &splits[i], rcfg, fcfg, exp))
        .collect::<Result<_>>()?;

    let mut summaries = Vec::new();
    for &s in &strategies {
        for m in Metric::ALL {
            let v: Vec<f64> = folds
                .iter()
                .filter(|f| f.strategy == s)
                .map(|f| m.value(&f.metrics))
                .collect();
            let (mean, std) = mean_std(&v);
            summaries.push(MetricSummary {
                strategy: s,
                metric: m,
                mean,
                std,
            });
        }
    }

    let values = blocks(&folds, &strategies, exp.repetitions, exp.blocks);
    let ranks = rank_blocks(&values, true);
    let avg = average_ranks(&ranks);
    let k = strategies.len();
    let fr = friedman(&ranks).ok();
    let cd = nemenyi_cd(k, ranks.len(), exp.cd_alpha).ok().filter(|_| k >= 2);
    let mut report = ExperimentReport {
        schema_version: SCHEMA_VERSION,
        kind: "experiment".into(),
        n_instances: d.n(),
        n_attributes: d.p(),
        strategies: strategies.clone(),
        config: exp.clone(),
        resample: rcfg.clone(),
        forest: fcfg.clone(),
        summaries,
        n_blocks: ranks.len(),
        ranks: strategies
            .iter()
            .zip(avg)
            .map(|(&strategy, average_rank)| StrategyRank { strategy, average_rank })
            .collect(),
        friedman_statistic: fr.map(|f| f.statistic),
        friedman_p: fr.map(|f| f.p_value),
        nemenyi_cd: cd,
        best_strategy: strategies[0],
        folds,
    };
    report.best_strategy = select_best(&report);
    Ok(report)
}

/// Lowest average rank; ties go to the larger mean IBA, then the larger
/// mean OP, then the earlier strategy.
pub fn select_best(report: &ExperimentReport) -> StrategyId {
    let key = |s: StrategyId| {
        (
            report.average_rank(s).unwrap_or(f64::INFINITY),
            -report.mean(s, Metric::Iba),
            -report.mean(s, Metric::Op),
            s,
        )
    };
    report
        .strategies
        .iter()
        .copied()
        .min_by(|&a, &b| {
            let (ka, kb) = (key(a), key(b));
            ka.0.total_cmp(&kb.0)
                .then(ka.1.total_cmp(&kb.1))
                .then(ka.2.total_cmp(&kb.2))
                .then(ka.3.cmp(&kb.3))
        })
        .expect("at least one strategy")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate, SynthSpec};

    fn small() -> Dataset {
        generate(&SynthSpec {
            n: 120,
            ir_target: 3.0,
            seed: 4,
            ..Default::default()
        })
        .unwrap()
        .dataset
    }

    fn quick() -> (ForestConfig, ExperimentConfig) {
        (
            ForestConfig {
                n_trees: 5,
                ..Default::default()
            },
            ExperimentConfig {
                k_folds: 3,
                repetitions: 2,
                seed: 11,
                ..Default::default()
            },
        )
    }

    #[test]
    fn single_strategy_bookkeeping() {
        let d = small();
        let (f, e) = quick();
        let r = run_experiment(&d, &[StrategyId::Original], &ResampleConfig::default(), &f, &e).unwrap();
        assert_eq!(r.strategies, vec![StrategyId::Original]);
        assert_eq!(r.folds.len(), 6);
        assert_eq!(r.summaries.len(), 8);
        assert_eq!(r.best_strategy, StrategyId::Original);
        assert!(r.friedman_statistic.is_none());
        for rep in 0..2 {
            let mut seen: Vec<usize> = r
                .folds
                .iter()
                .filter(|f| f.repetition == rep)
                .flat_map(|f| f.test_indices.clone())
                .collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..d.n()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn test_rows_never_train() {
        let d = small();
        let (f, e) = quick();
        let r = run_experiment(&d, &StrategyId::EVALUATED, &ResampleConfig::default(), &f, &e).unwrap();
        for fr in &r.folds {
            assert!(fr.training_sources.iter().all(|i| fr.test_indices.binary_search(i).is_err()));
        }
        let k = r.strategies.len() as f64;
        let total: f64 = r.ranks.iter().map(|x| x.average_rank).sum();
        assert!((total - k * (k + 1.0) / 2.0).abs() < 1e-9);
        assert_eq!(r.n_blocks, 16);
        assert_eq!(select_best(&r), r.best_strategy);
    }

    #[test]
    fn tie_breaks() {
        let d = small();
        let (f, e) = quick();
        let mut r = run_experiment(&d, &[StrategyId::Original, StrategyId::Ros], &ResampleConfig::default(), &f, &e)
            .unwrap();
        for x in &mut r.ranks {
            x.average_rank = 1.5;
        }
        for s in &mut r.summaries {
            if s.metric == Metric::Iba {
                s.mean = if s.strategy == StrategyId::Ros { 0.82 } else { 0.79 };
            }
        }
        assert_eq!(select_best(&r), StrategyId::Ros);
        for s in &mut r.summaries {
            s.mean = 0.5;
        }
        assert_eq!(select_best(&r), StrategyId::Original);
    }

    #[test]
    fn per_metric_blocks() {
        let d = small();
        let (f, mut e) = quick();
        e.blocks = BlockMode::Metric;
        let r = run_experiment(&d, &[StrategyId::Original, StrategyId::Rus], &ResampleConfig::default(), &f, &e)
            .unwrap();
        assert_eq!(r.n_blocks, 8);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * 6 * 8);
    }
}
