//! Strategy recommendation by matching a profile against a rule model.

mod builtin;

pub use builtin::{builtin_by_name, builtin_iba, builtin_models, builtin_overall};

use serde::{Deserialize, Serialize};

use crate::num;
use crate::profile::Profile;
use crate::resample::StrategyId;
use crate::rules::{Rule, RuleModel};

/// Strategy recommended when no rule fires.
pub const FALLBACK: StrategyId = StrategyId::Smote;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedRule {
    /// Position of the rule in its model, from 0.
    pub index: usize,
    pub text: String,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyScore {
    pub strategy: StrategyId,
    #[serde(with = "num::sig")]
    pub max_confidence: f64,
    #[serde(with = "num::sig")]
    pub max_lift: f64,
    pub matches: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub strategy: StrategyId,
    pub model: String,
    pub fallback: bool,
    /// `(confidence, lift)` of the winning strategy.
    pub score: Option<(f64, f64)>,
    /// Every strategy with at least one matching rule, best first.
    pub ranking: Vec<StrategyScore>,
    pub matched_rules: Vec<MatchedRule>,
}

pub fn matches(rule: &Rule, p: &Profile) -> bool {
    rule.matches(p)
}

/// Ranks the consequents of all matching rules by their best confidence,
/// then best lift, then number of matching rules, then strategy order. With
/// no match the result is [`FALLBACK`], flagged.
pub fn recommend(p: &Profile, model: &RuleModel) -> Recommendation {
    let matched: Vec<MatchedRule> = model
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| r.matches(p))
        .map(|(index, r)| MatchedRule {
            index,
            text: r.to_string(),
            rule: r.clone(),
        })
        .collect();
    let mut ranking: Vec<StrategyScore> = Vec::new();
    for m in &matched {
        let r = &m.rule;
        match ranking.iter_mut().find(|s| s.strategy == r.consequent) {
            Some(s) => {
                s.max_confidence = s.max_confidence.max(r.confidence);
                s.max_lift = s.max_lift.max(r.lift);
                s.matches += 1;
            }
            None => ranking.push(StrategyScore {
                strategy: r.consequent,
                max_confidence: r.confidence,
                max_lift: r.lift,
                matches: 1,
            }),
        }
    }
    ranking.sort_by(|a, b| {
        b.max_confidence
            .total_cmp(&a.max_confidence)
            .then(b.max_lift.total_cmp(&a.max_lift))
            .then(b.matches.cmp(&a.matches))
            .then(a.strategy.cmp(&b.strategy))
    });
    let top = ranking.first();
    Recommendation {
        strategy: top.map_or(FALLBACK, |s| s.strategy),
        model: model.name.clone(),
        fallback: top.is_none(),
        score: top.map(|s| (s.max_confidence, s.max_lift)),
        ranking,
        matched_rules: matched,
    }
}
