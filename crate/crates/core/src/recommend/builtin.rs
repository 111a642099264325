//! The two published rule sets, bounds and measures as printed.

use crate::resample::StrategyId::{self, *};
use crate::rules::{Condition, Feature, Interval, Rule, RuleModel};

const NINF: f64 = f64::NEG_INFINITY;
const INF: f64 = f64::INFINITY;

use Feature::{Attributes as NATT, Borderline as BL, Instances as NINST, Ir as IR, Overlap as OVL};

type Row = (&'static [(Feature, f64, f64)], StrategyId, [f64; 4]);

fn build(name: &str, provenance: &str, rows: &[Row]) -> RuleModel {
    let rules = rows
        .iter()
        .map(|&(conds, consequent, [confidence, lift, leverage, conviction])| Rule {
            antecedent: conds
                .iter()
                .map(|&(feature, lo, hi)| Condition {
                    feature,
                    interval: Interval::left_open(lo, hi),
                })
                .collect(),
            consequent,
            support: None,
            confidence,
            lift,
            leverage,
            conviction,
        })
        .collect();
    RuleModel::new(name, provenance, rules)
}

const IBA_ROWS: [Row; 10] = [
    (&[(IR, NINF, 48.0), (BL, 6.75, 12.56), (OVL, 78.8, INF)], Ros, [1.00, 9.00, 0.03, 1.78]),
    (&[(IR, NINF, 48.0), (BL, 12.56, 18.38), (OVL, 44.4, 61.6)], Original, [1.00, 6.75, 0.03, 1.70]),
    (&[(IR, NINF, 48.0), (BL, NINF, 6.75), (OVL, 44.4, 61.6)], SmoteTl, [1.00, 3.00, 0.02, 1.33]),
    (&[(BL, NINF, 6.75), (OVL, 61.6, 78.8)], SmoteCnn, [1.00, 1.64, 0.01, 0.78]),
    (&[(IR, 48.0, 91.0), (BL, NINF, 6.75), (OVL, 61.6, 78.8)], Smote, [1.00, 1.64, 0.01, 0.78]),
    (&[(IR, 48.0, 91.0), (BL, NINF, 6.75), (OVL, 78.8, INF)], Ros, [1.00, 1.64, 0.01, 0.78]),
    (&[(IR, NINF, 48.0), (NINST, NINF, 3154.0)], Smote, [1.00, 1.54, 0.05, 2.46]),
    (&[(NINST, NINF, 3007.0), (NATT, NINF, 22.0), (OVL, 61.6, 78.8)], Smote, [1.00, 1.29, 0.02, 1.11]),
    (&[(NINST, NINF, 3007.0), (OVL, 44.4, 61.6)], Smote, [1.00, 1.54, 0.03, 1.41]),
    (&[(NATT, NINF, 22.0), (BL, NINF, 6.75)], SmoteOss, [1.00, 1.29, 0.02, 1.11]),
];

const OVERALL_ROWS: [Row; 10] = [
    (&[(IR, NINF, 48.0), (BL, 12.56, 18.38)], Original, [1.00, 8.00, 0.04, 1.75]),
    (&[(IR, NINF, 48.0), (BL, 6.75, 12.56), (OVL, 78.8, INF)], Ros, [1.00, 5.00, 0.04, 1.60]),
    (&[(BL, 6.75, 12.56), (OVL, 44.4, 61.6)], Smote, [1.00, 4.44, 0.04, 1.55]),
    (&[(IR, NINF, 48.0), (BL, NINF, 6.75), (OVL, 44.4, 61.6)], SmoteTl, [1.00, 4.44, 0.04, 1.55]),
    (&[(IR, 48.0, 91.0), (OVL, 78.8, INF)], SmoteTl, [1.00, 4.00, 0.04, 1.50]),
    (&[(IR, 134.0, 178.0)], Ros, [1.00, 2.86, 0.03, 1.30]),
    (&[(BL, 6.75, 12.56), (OVL, 78.8, INF)], Ros, [1.00, 2.86, 0.03, 1.30]),
    (&[(NINST, NINF, 3007.0), (OVL, 44.4, 61.6)], Smote, [1.00, 1.48, 0.04, 1.63]),
    (&[(NATT, NINF, 22.0), (BL, NINF, 6.75)], SmoteCnn, [1.00, 1.29, 0.02, 0.68]),
    (&[(IR, 48.0, 91.0), (NATT, NINF, 22.0)], SmoteOss, [1.00, 1.29, 0.02, 0.68]),
];

/// Rules predicting the strategy with the best IBA.
pub fn builtin_iba() -> RuleModel {
    build(
        "builtin-iba",
        "published rules for the best strategy by IBA; measures as printed",
        &IBA_ROWS,
    )
}

/// Rules predicting the best strategy over all metrics.
pub fn builtin_overall() -> RuleModel {
    build(
        "builtin-overall",
        "published rules for the best strategy over all metrics; measures as printed",
        &OVERALL_ROWS,
    )
}

pub fn builtin_models() -> (RuleModel, RuleModel) {
    (builtin_iba(), builtin_overall())
}

pub fn builtin_by_name(name: &str) -> Option<RuleModel> {
    match name {
        "builtin-iba" | "iba" => Some(builtin_iba()),
        "builtin-overall" | "overall" => Some(builtin_overall()),
        _ => None,
    }
}
