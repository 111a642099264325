//! Brute-force and hand-derived oracles for the geometric, tree and rule
//! components.

mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rebalance::data::{generate, stratified_folds, SynthSpec};
use rebalance::forest::{best_split, gini, train, ForestConfig};
use rebalance::neighbors::{build_mst, NeighborIndex};
use rebalance::profile::profile;
use rebalance::recommend::{builtin_iba, builtin_overall, recommend};
use rebalance::resample::{apply, ResampleConfig, StrategyId};
use rebalance::rules::Rule;
use rebalance::Class;

/// Minimum spanning weight by enumerating every (n-1)-edge subset.
fn brute_mst_weight(d: &rebalance::Dataset) -> f64 {
    let n = d.n();
    let edges: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .map(|(a, b)| (a, b, sq(d, a, b).sqrt()))
        .collect();
    let mut best = f64::INFINITY;
    let mut pick = vec![0usize; n - 1];
    fn rec(
        at: usize,
        start: usize,
        pick: &mut Vec<usize>,
        edges: &[(usize, usize, f64)],
        n: usize,
        best: &mut f64,
    ) {
        if at == pick.len() {
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            let mut w = 0.0;
            for &e in pick.iter() {
                let (a, b, c) = edges[e];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    return;
                }
                parent[ra] = rb;
                w += c;
            }
            *best = best.min(w);
            return;
        }
        for e in start..edges.len() {
            pick[at] = e;
            rec(at + 1, e + 1, pick, edges, n, best);
        }
    }
    rec(0, 0, &mut pick, &edges, n, &mut best);
    best
}

#[test]
fn mst_matches_exhaustive_search() {
    for seed in 0..40u64 {
        let n = 3 + (seed as usize % 5);
        let d = unit_cube(seed, n.max(4), 2, 0.4);
        let idx = NeighborIndex::from_dataset(&d).unwrap();
        let mst = build_mst(&idx).unwrap();
        assert_eq!(mst.len(), d.n() - 1);
        let w: f64 = mst.iter().map(|e| sq(&d, e.u, e.v).sqrt()).sum();
        let want = brute_mst_weight(&d);
        assert!((w - want).abs() < 1e-9, "seed {seed}: {w} vs {want}");
    }
}

#[test]
fn knn_matches_sorting() {
    for seed in 0..30u64 {
        let d = unit_cube(seed, 60, 3, 0.3);
        let idx = NeighborIndex::from_dataset(&d).unwrap();
        let all: Vec<usize> = (0..d.n()).collect();
        for q in [0, 7, 33, 59] {
            let got: Vec<usize> = idx.knn_query(d.row(q), 5, Some(q)).unwrap().iter().map(|n| n.index).collect();
            assert_eq!(got, by_distance(&d, q, &all)[..5].to_vec());
        }
    }
}

/// Exhaustive scan over every feature and every midpoint threshold.
fn scan_best(x: &[f64], p: usize, labels: &[Class], rows: &[usize], features: &[usize]) -> Option<f64> {
    let count = |rs: &[usize]| {
        let m = rs.iter().filter(|&&r| labels[r] == Class::Minority).count() as u64;
        [m, rs.len() as u64 - m]
    };
    let parent = gini(count(rows));
    let n = rows.len() as f64;
    let mut best: Option<f64> = None;
    for &f in features {
        let mut vals: Vec<f64> = rows.iter().map(|&r| x[r * p + f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for w in vals.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[i * p + f] <= t);
            let dec = parent - (l.len() as f64 / n) * gini(count(&l)) - (r.len() as f64 / n) * gini(count(&r));
            best = Some(best.map_or(dec, |b: f64| b.max(dec)));
        }
    }
    best.filter(|&b| b > 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gini_split_is_exhaustive_best(seed in 0u64..10_000, n in 2usize..200, p in 1usize..5) {
        let d = unit_cube(seed, n.max(4), p, 0.35);
        let rows: Vec<usize> = (0..d.n()).collect();
        let features: Vec<usize> = (0..p).collect();
        let got = best_split(d.features(), p, d.labels(), &rows, &features);
        let want = scan_best(d.features(), p, d.labels(), &rows, &features);
        match (got, want) {
            (None, None) => {}
            (Some(s), Some(w)) => {
                prop_assert!((s.decrease - w).abs() < 1e-12);
                // the chosen threshold separates two observed values
                let col: Vec<f64> = rows.iter().map(|&r| d.row(r)[s.feature]).collect();
                prop_assert!(col.iter().any(|&v| v <= s.threshold) && col.iter().any(|&v| v > s.threshold));
            }
            other => prop_assert!(false, "mismatch {:?}", other),
        }
    }

    #[test]
    fn folds_are_stratified(seed in 0u64..1000, k in 2usize..8) {
        let d = unit_cube(seed, 120, 2, 0.25);
        let plan = stratified_folds(&d, k, 2, seed).unwrap();
        let n_min = d.count(Class::Minority);
        let ceil = n_min.div_ceil(k);
        for rep in 0..2 {
            let mut seen = vec![0; d.n()];
            for f in 0..k {
                let t = plan.test_indices(rep, f);
                let m = t.iter().filter(|&&i| d.label(i) == Class::Minority).count();
                prop_assert!(m.abs_diff(ceil) <= 1);
                for i in t { seen[i] += 1; }
            }
            prop_assert!(seen.iter().all(|&c| c == 1));
        }
    }
}

#[test]
fn separable_line_single_tree() {
    let xs = [0.05, 0.1, 0.2, 0.3, 0.45, 0.55, 0.6, 0.8, 0.9, 0.95];
    let labels: Vec<Class> = xs.iter().map(|&x| if x < 0.5 { Class::Minority } else { Class::Majority }).collect();
    let d = rebalance::Dataset::from_classes(xs.iter().map(|&x| vec![x]).collect(), labels).unwrap();
    let cfg = ForestConfig {
        n_trees: 1,
        bootstrap: false,
        ..Default::default()
    };
    let m = train(&d, &cfg).unwrap();
    assert_eq!(m.predict(&d).unwrap(), d.labels());
    assert_eq!(train(&d, &cfg).unwrap().predict_proba(&d).unwrap(), m.predict_proba(&d).unwrap());
}

#[test]
fn well_separated_data_is_learnt() {
    for seed in 0..10u64 {
        let spec = |s| SynthSpec {
            n: 400,
            ir_target: 3.0,
            class_sep: 6.0,
            seed: s,
            ..Default::default()
        };
        let train_set = generate(&spec(seed)).unwrap().dataset;
        let test_set = generate(&spec(seed + 1000)).unwrap().dataset;
        let m = train(&train_set, &ForestConfig { n_trees: 30, seed, ..Default::default() }).unwrap();
        let pred = m.predict(&test_set).unwrap();
        let acc = pred.iter().zip(test_set.labels()).filter(|(a, b)| a == b).count() as f64 / pred.len() as f64;
        assert!(acc >= 0.95, "seed {seed}: accuracy {acc}");
    }
}

#[test]
fn strategies_keep_their_shape() {
    for seed in 0..10u64 {
        let d = unit_cube(seed, 150, 3, 0.2);
        let n_min = d.count(Class::Minority);
        let n_maj = d.count(Class::Majority);
        let cfg = ResampleConfig { seed, ..Default::default() };
        for s in StrategyId::ALL {
            let r = apply(s, &d, &cfg).unwrap();
            let (m, j) = (r.dataset.count(Class::Minority), r.dataset.count(Class::Majority));
            match s {
                StrategyId::Original => assert_eq!(r.dataset, d),
                StrategyId::Rus => assert_eq!((m, j), (n_min, n_min)),
                StrategyId::Ros | StrategyId::Smote => assert_eq!((m, j), (6 * n_min, n_maj)),
                StrategyId::Cnn | StrategyId::Enn | StrategyId::Tl | StrategyId::Oss => {
                    assert_eq!(m, n_min, "{s} must keep every minority row");
                    assert!(j <= n_maj);
                }
                _ => assert!(m <= 6 * n_min && j <= n_maj, "{s}"),
            }
            // every kept row copies an input row with the same label
            for (row, o) in r.origin.iter().enumerate() {
                if let Some(i) = o {
                    assert_eq!(r.dataset.row(row), d.row(*i));
                    assert_eq!(r.dataset.label(row), d.label(*i));
                }
            }
        }
    }
}

#[test]
fn profile_of_two_separated_blobs() {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..40 {
        let minority = i < 10;
        let c = if minority { 10.0 } else { 0.0 };
        rows.push(vec![c + rng.random::<f64>(), rng.random::<f64>()]);
        labels.push(if minority { Class::Minority } else { Class::Majority });
    }
    let d = rebalance::Dataset::from_classes(rows, labels).unwrap();
    let p = profile(&d).unwrap();
    assert_eq!((p.n_instances, p.n_attributes), (40, 2));
    assert!((p.imbalance_ratio - 3.0).abs() < 1e-12);
    // one MST edge bridges the blobs
    assert!((p.borderline_pct - 5.0).abs() < 1e-12);
    assert!(p.overlap_pct < 1.0);
}

#[test]
fn single_rule_rows_follow_that_rule() {
    for model in [builtin_overall(), builtin_iba()] {
        for (name, p) in table1() {
            let hits: Vec<&Rule> = model.rules.iter().filter(|r| r.matches(&p)).collect();
            let rec = recommend(&p, &model);
            assert_eq!(rec.fallback, hits.is_empty(), "{name}");
            if let [only] = hits[..] {
                assert_eq!(rec.strategy, only.consequent, "{name} under {}", model.name);
            }
        }
    }
}

#[test]
fn dropping_conditions_never_shrinks_matches() {
    let rows = table1();
    for rule in builtin_overall().rules.iter().chain(builtin_iba().rules.iter()) {
        for drop in 0..rule.antecedent.len() {
            let mut looser = rule.clone();
            looser.antecedent.remove(drop);
            for (_, p) in &rows {
                assert!(!rule.matches(p) || looser.matches(p));
            }
        }
    }
}
