//! Binary classification metrics with the minority class as positive.
//!
//! Undefined ratios (0/0) evaluate to 0 and raise a [`Degeneracy`] flag
//! instead of producing NaN, so downstream rank aggregation always has a
//! number to work with.

use serde::{Deserialize, Serialize};

use crate::data::Class;
use crate::error::{Error, Result};
use crate::num;

/// Default weight of the dominance term in IBA.
pub const IBA_ALPHA: f64 = 0.1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub fp: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fn_: u64, tn: u64, fp: u64) -> Self {
        ConfusionCounts { tp, fn_, tn, fp }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fn_ + self.tn + self.fp
    }

    /// Minority recall.
    pub fn tpr(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// Majority recall.
    pub fn tnr(&self) -> f64 {
        ratio(self.tn, self.tn + self.fp)
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.tp + self.tn, self.total())
    }

    /// Counts with the positive class swapped.
    pub fn swapped(&self) -> ConfusionCounts {
        ConfusionCounts::new(self.tn, self.fp, self.tp, self.fn_)
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    EmptyInput,
    NoActualPositives,
    NoActualNegatives,
    NoPredictedPositives,
    NoPredictedNegatives,
    FMeasureUndefined,
    OpUndefined,
    AucUndefined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    #[serde(with = "num::sig")]
    pub accuracy: f64,
    #[serde(with = "num::sig")]
    pub precision_min: f64,
    #[serde(with = "num::sig")]
    pub precision_maj: f64,
    #[serde(with = "num::sig")]
    pub precision_macro: f64,
    #[serde(with = "num::sig")]
    pub recall_min: f64,
    #[serde(with = "num::sig")]
    pub recall_maj: f64,
    #[serde(with = "num::sig")]
    pub f_measure: f64,
    #[serde(with = "num::sig")]
    pub g_mean: f64,
    #[serde(with = "num::sig")]
    pub auc: f64,
    #[serde(with = "num::sig")]
    pub op: f64,
    #[serde(with = "num::sig")]
    pub iba: f64,
    #[serde(with = "num::sig")]
    pub alpha: f64,
    pub degenerate: Vec<Degeneracy>,
}

pub fn confusion(actual: &[Class], predicted: &[Class]) -> Result<ConfusionCounts> {
    if actual.len() != predicted.len() || actual.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "confusion needs equal non-empty inputs, got {} and {}",
            actual.len(),
            predicted.len()
        )));
    }
    let mut c = ConfusionCounts::default();
    for (&a, &p) in actual.iter().zip(predicted) {
        match (a, p) {
            (Class::Minority, Class::Minority) => c.tp += 1,
            (Class::Minority, Class::Majority) => c.fn_ += 1,
            (Class::Majority, Class::Majority) => c.tn += 1,
            (Class::Majority, Class::Minority) => c.fp += 1,
        }
    }
    Ok(c)
}

/// The rate-based part of a report: accuracy, precisions, recalls and F.
/// Fields that need scores (AUC) or composite formulas are left at 0.
pub fn rates(c: &ConfusionCounts) -> MetricReport {
    let mut flags = Vec::new();
    if c.total() == 0 {
        flags.push(Degeneracy::EmptyInput);
    }
    if c.tp + c.fn_ == 0 {
        flags.push(Degeneracy::NoActualPositives);
    }
    if c.tn + c.fp == 0 {
        flags.push(Degeneracy::NoActualNegatives);
    }
    if c.tp + c.fp == 0 {
        flags.push(Degeneracy::NoPredictedPositives);
    }
    if c.tn + c.fn_ == 0 {
        flags.push(Degeneracy::NoPredictedNegatives);
    }
    let precision_min = ratio(c.tp, c.tp + c.fp);
    let precision_maj = ratio(c.tn, c.tn + c.fn_);
    let (tpr, tnr) = (c.tpr(), c.tnr());
    let f_measure = if precision_min + tpr > 0.0 {
        2.0 * precision_min * tpr / (precision_min + tpr)
    } else {
        flags.push(Degeneracy::FMeasureUndefined);
        0.0
    };
    MetricReport {
        accuracy: c.accuracy(),
        precision_min,
        precision_maj,
        precision_macro: (precision_min + precision_maj) / 2.0,
        recall_min: tpr,
        recall_maj: tnr,
        f_measure,
        g_mean: 0.0,
        auc: 0.0,
        op: 0.0,
        iba: 0.0,
        alpha: IBA_ALPHA,
        degenerate: flags,
    }
}

/// √(TPR·TNR).
pub fn g_mean(c: &ConfusionCounts) -> f64 {
    (c.tpr() * c.tnr()).sqrt()
}

/// Optimised precision: accuracy − |TNR − TPR| / (TNR + TPR). When both
/// rates are 0 the penalty is taken as 1; the returned flag reports that.
pub fn op_flagged(c: &ConfusionCounts) -> (f64, bool) {
    let (tpr, tnr) = (c.tpr(), c.tnr());
    if tpr + tnr == 0.0 {
        (c.accuracy() - 1.0, true)
    } else {
        (c.accuracy() - (tnr - tpr).abs() / (tnr + tpr), false)
    }
}

pub fn op(c: &ConfusionCounts) -> f64 {
    op_flagged(c).0
}

/// Dominance TPR − TNR.
pub fn dominance(c: &ConfusionCounts) -> f64 {
    c.tpr() - c.tnr()
}

/// Index of balanced accuracy `(1 + α·Dom)·m` for a base metric value `m`.
pub fn iba(c: &ConfusionCounts, alpha: f64, base: f64) -> f64 {
    (1.0 + alpha * dominance(c)) * base
}

/// IBA with G-mean as the base metric.
pub fn iba_gmean(c: &ConfusionCounts, alpha: f64) -> f64 {
    iba(c, alpha, g_mean(c))
}

/// Area under the ROC curve in Mann–Whitney form: the fraction of
/// (positive, negative) pairs ranked correctly, ties counting one half.
/// Returns `None` when either class is absent.
pub fn auc(actual: &[Class], scores: &[f64]) -> Option<f64> {
    assert_eq!(actual.len(), scores.len(), "one score per label");
    let n_pos = actual.iter().filter(|c| c.is_minority()).count();
    let n_neg = actual.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    // Sort by score; walk tie groups accumulating negatives seen below.
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut wins = 0.0;
    let mut neg_below = 0usize;
    let mut g = 0;
    while g < order.len() {
        let mut end = g;
        while end < order.len() && scores[order[end]] == scores[order[g]] {
            end += 1;
        }
        let (mut pos_here, mut neg_here) = (0usize, 0usize);
        for &i in &order[g..end] {
            if actual[i].is_minority() {
                pos_here += 1;
            } else {
                neg_here += 1;
            }
        }
        wins += pos_here as f64 * (neg_below as f64 + 0.5 * neg_here as f64);
        neg_below += neg_here;
        g = end;
    }
    Some(wins / (n_pos as f64 * n_neg as f64))
}

/// Every metric for one set of predictions. `scores` are minority-class
/// scores (higher = more likely minority).
pub fn metric_suite(actual: &[Class], predicted: &[Class], scores: &[f64], alpha: f64) -> Result<MetricReport> {
    let c = confusion(actual, predicted)?;
    if scores.len() != actual.len() {
        return Err(Error::InvalidConfig("one score per prediction required".into()));
    }
    let mut report = rates(&c);
    report.alpha = alpha;
    report.g_mean = g_mean(&c);
    let (op, op_degenerate) = op_flagged(&c);
    report.op = op;
    if op_degenerate {
        report.degenerate.push(Degeneracy::OpUndefined);
    }
    report.iba = iba(&c, alpha, report.g_mean);
    report.auc = auc(actual, scores).unwrap_or_else(|| {
        report.degenerate.push(Degeneracy::AucUndefined);
        0.0
    });
    report.degenerate.sort_unstable();
    report.degenerate.dedup();
    Ok(report)
}

/// The eight metrics used to rank strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Accuracy,
    Precision,
    Recall,
    FMeasure,
    Auc,
    GMean,
    Op,
    Iba,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Accuracy,
        Metric::Precision,
        Metric::Recall,
        Metric::FMeasure,
        Metric::Auc,
        Metric::GMean,
        Metric::Op,
        Metric::Iba,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Accuracy => "accuracy",
            Metric::Precision => "precision",
            Metric::Recall => "recall",
            Metric::FMeasure => "f_measure",
            Metric::Auc => "auc",
            Metric::GMean => "g_mean",
            Metric::Op => "op",
            Metric::Iba => "iba",
        }
    }

    /// Precision is the macro average over both classes; recall is the
    /// minority recall.
    pub fn value(self, r: &MetricReport) -> f64 {
        match self {
            Metric::Accuracy => r.accuracy,
            Metric::Precision => r.precision_macro,
            Metric::Recall => r.recall_min,
            Metric::FMeasure => r.f_measure,
            Metric::Auc => r.auc,
            Metric::GMean => r.g_mean,
            Metric::Op => r.op,
            Metric::Iba => r.iba,
        }
    }
}
