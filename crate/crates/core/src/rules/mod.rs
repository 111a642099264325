//! Association rules over dataset meta-features: equal-width binning,
//! transaction building, Apriori mining and rule quality measures.

mod apriori;

pub use apriori::{frequent_itemsets, generate_rules, measures, Itemset, RawRule};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num;
use crate::profile::Profile;
use crate::resample::StrategyId;

const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Feature {
    #[serde(rename = "#Instances")]
    Instances,
    #[serde(rename = "#Attributes")]
    Attributes,
    #[serde(rename = "IR")]
    Ir,
    #[serde(rename = "BL%")]
    Borderline,
    #[serde(rename = "OVL%")]
    Overlap,
}

impl Feature {
    pub const ALL: [Feature; 5] = [
        Feature::Instances,
        Feature::Attributes,
        Feature::Ir,
        Feature::Borderline,
        Feature::Overlap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::Instances => "#Instances",
            Feature::Attributes => "#Attributes",
            Feature::Ir => "IR",
            Feature::Borderline => "BL%",
            Feature::Overlap => "OVL%",
        }
    }

    pub fn value(self, p: &Profile) -> f64 {
        match self {
            Feature::Instances => p.n_instances as f64,
            Feature::Attributes => p.n_attributes as f64,
            Feature::Ir => p.imbalance_ratio,
            Feature::Borderline => p.borderline_pct,
            Feature::Overlap => p.overlap_pct,
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Feature::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown feature {s:?}"))
    }
}

/// A real interval with independently open or closed ends. Infinite ends
/// are always open.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "num::sig")]
    pub lower: f64,
    #[serde(with = "num::sig")]
    pub upper: f64,
    pub lower_open: bool,
    pub upper_open: bool,
}

impl Interval {
    /// `(lower, upper]`, with an open upper end when `upper` is infinite.
    pub fn left_open(lower: f64, upper: f64) -> Interval {
        Interval {
            lower,
            upper,
            lower_open: true,
            upper_open: upper.is_infinite(),
        }
    }

    pub fn everything() -> Interval {
        Interval::left_open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lower_open { x > self.lower } else { x >= self.lower };
        let below = if self.upper_open { x < self.upper } else { x <= self.upper };
        above && below
    }
}

fn bound(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        let s = format!("{:.2}", x);
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".into()
        } else {
            s.into()
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}-{}{}",
            if self.lower_open { '(' } else { '[' },
            bound(self.lower),
            bound(self.upper),
            if self.upper_open { ')' } else { ']' }
        )
    }
}

/// `k` equal-width bins over `[min, max]` with cuts `min + i·(max−min)/k`.
/// The first bin starts at −∞, the last ends at +∞, and every bin is
/// right-closed.
pub fn equal_width_bins(min: f64, max: f64, k: usize) -> Result<Vec<Interval>> {
    if !(min < max && min.is_finite() && max.is_finite()) {
        return Err(Error::InvalidConfig(format!("cannot bin the range [{min}, {max}]")));
    }
    if k == 0 {
        return Err(Error::InvalidConfig("bin count must be positive".into()));
    }
    let width = (max - min) / k as f64;
    let mut edges = vec![f64::NEG_INFINITY];
    edges.extend((1..k).map(|i| min + i as f64 * width));
    edges.push(f64::INFINITY);
    Ok(edges.windows(2).map(|w| Interval::left_open(w[0], w[1])).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Item {
    Feature { feature: Feature, interval: Interval },
    Best(StrategyId),
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Feature { feature, interval } => write!(f, "{feature}={interval}"),
            Item::Best(s) => write!(f, "BEST={s}"),
        }
    }
}

/// Binned profiles. `items` is the item dictionary; each transaction lists
/// sorted indices into it.
#[derive(Clone, Debug, PartialEq)]
pub struct TransactionBase {
    pub bins: Vec<(Feature, Vec<Interval>)>,
    pub items: Vec<Item>,
    pub transactions: Vec<Vec<usize>>,
}

impl TransactionBase {
    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn decode(&self, ids: &[usize]) -> Vec<Item> {
        ids.iter().map(|&i| self.items[i]).collect()
    }
}

/// Bins each meta-feature into five equal-width intervals over the observed
/// range and turns every labelled profile into five interval items plus its
/// BEST item. A feature constant across all profiles gets one unbounded
/// bin.
pub fn to_transactions(profiles: &[(Profile, StrategyId)]) -> Result<TransactionBase> {
    if profiles.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 labelled profiles, got {}",
            profiles.len()
        )));
    }
    let mut bins = Vec::new();
    let mut items = Vec::new();
    for f in Feature::ALL {
        let values: Vec<f64> = profiles.iter().map(|(p, _)| f.value(p)).collect();
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!("{f} value {v} cannot be binned")));
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let b = if lo < hi {
            equal_width_bins(lo, hi, 5)?
        } else {
            vec![Interval::everything()]
        };
        items.extend(b.iter().map(|&interval| Item::Feature { feature: f, interval }));
        bins.push((f, b));
    }
    let best_offset = items.len();
    items.extend(StrategyId::ALL.iter().map(|&s| Item::Best(s)));

    let transactions = profiles
        .iter()
        .map(|(p, s)| {
            let mut t = Vec::with_capacity(6);
            let mut offset = 0;
            for (f, b) in &bins {
                let v = f.value(p);
                let j = b.iter().position(|iv| iv.contains(v)).expect("bins cover the line");
                t.push(offset + j);
                offset += b.len();
            }
            let s_pos = StrategyId::ALL.iter().position(|x| x == s).expect("listed strategy");
            t.push(best_offset + s_pos);
            t
        })
        .collect();
    Ok(TransactionBase {
        bins,
        items,
        transactions,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub feature: Feature,
    pub interval: Interval,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.feature, self.interval)
    }
}

/// `antecedent → BEST = consequent`. Support is absent for rules
/// transcribed from elsewhere without it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub antecedent: Vec<Condition>,
    pub consequent: StrategyId,
    #[serde(with = "num::sig_opt", default, skip_serializing_if = "Option::is_none")]
    pub support: Option<f64>,
    #[serde(with = "num::sig")]
    pub confidence: f64,
    #[serde(with = "num::sig")]
    pub lift: f64,
    #[serde(with = "num::sig")]
    pub leverage: f64,
    #[serde(with = "num::sig")]
    pub conviction: f64,
}

impl Rule {
    /// Every antecedent interval contains the profile's raw value.
    pub fn matches(&self, p: &Profile) -> bool {
        self.antecedent
            .iter()
            .all(|c| c.interval.contains(c.feature.value(p)))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs: Vec<String> = self.antecedent.iter().map(|c| c.to_string()).collect();
        write!(f, "{} -> {}", lhs.join(" & "), self.consequent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleModel {
    pub schema_version: u32,
    pub name: String,
    pub provenance: String,
    pub rules: Vec<Rule>,
}

impl RuleModel {
    pub fn new(name: impl Into<String>, provenance: impl Into<String>, rules: Vec<Rule>) -> RuleModel {
        RuleModel {
            schema_version: SCHEMA_VERSION,
            name: name.into(),
            provenance: provenance.into(),
            rules,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rule model serializes")
    }

    pub fn from_json(text: &str) -> Result<RuleModel> {
        let m: RuleModel = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "unsupported rule model schema version {}",
                m.schema_version
            )));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MiningConfig {
    pub min_support: f64,
    pub min_confidence: f64,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            min_support: 0.05,
            min_confidence: 0.9,
        }
    }
}

/// Mines rules whose consequent is a single BEST item and whose antecedent
/// holds only interval items. Sorted by confidence, then lift, both
/// descending, then by antecedent.
pub fn mine(base: &TransactionBase, cfg: &MiningConfig) -> Result<Vec<Rule>> {
    for (name, v) in [("support", cfg.min_support), ("confidence", cfg.min_confidence)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::InvalidConfig(format!("minimum {name} must lie in (0, 1], got {v}")));
        }
    }
    let is_best = |i: usize| matches!(base.items[i], Item::Best(_));
    let frequent = frequent_itemsets(&base.transactions, cfg.min_support);
    let raw = generate_rules(&frequent, base.len(), cfg.min_confidence, |c| {
        c.len() == 1 && is_best(c[0])
    });
    let mut rules: Vec<(Vec<usize>, Rule)> = raw
        .into_iter()
        .filter(|r| !r.antecedent.iter().any(|&i| is_best(i)))
        .map(|r| {
            let antecedent = r
                .antecedent
                .iter()
                .map(|&i| match base.items[i] {
                    Item::Feature { feature, interval } => Condition { feature, interval },
                    Item::Best(_) => unreachable!("filtered above"),
                })
                .collect();
            let Item::Best(consequent) = base.items[r.consequent[0]] else {
                unreachable!("consequent is a BEST item")
            };
            let rule = Rule {
                antecedent,
                consequent,
                support: Some(r.support),
                confidence: r.confidence,
                lift: r.lift,
                leverage: r.leverage,
                conviction: r.conviction,
            };
            (r.antecedent, rule)
        })
        .collect();
    rules.sort_by(|(ia, a), (ib, b)| {
        b.confidence
            .total_cmp(&a.confidence)
            .then(b.lift.total_cmp(&a.lift))
            .then_with(|| ia.len().cmp(&ib.len()))
            .then_with(|| ia.cmp(ib))
            .then_with(|| a.consequent.cmp(&b.consequent))
    });
    Ok(rules.into_iter().map(|(_, r)| r).collect())
}

/// Orders rules by decreasing confidence, then decreasing lift.
pub fn by_strength(a: &Rule, b: &Rule) -> Ordering {
    b.confidence.total_cmp(&a.confidence).then(b.lift.total_cmp(&a.lift))
}
