//! Levelwise frequent-itemset mining over integer item ids, and rule
//! generation from the frequent sets.

use std::collections::HashMap;

/// A frequent itemset: sorted item ids and the number of transactions
/// containing all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Itemset {
    pub items: Vec<usize>,
    pub count: usize,
}

fn contains_all(transaction: &[usize], items: &[usize]) -> bool {
    items.iter().all(|i| transaction.binary_search(i).is_ok())
}

fn is_frequent(count: usize, n: usize, min_support: f64) -> bool {
    count > 0 && count as f64 >= min_support * n as f64 - 1e-9
}

/// Every itemset whose support (fraction of transactions containing it) is
/// at least `min_support`. Transactions must hold sorted, distinct ids.
/// Output is ordered by size, then lexicographically.
pub fn frequent_itemsets(transactions: &[Vec<usize>], min_support: f64) -> Vec<Itemset> {
    let n = transactions.len();
    let mut singles: HashMap<usize, usize> = HashMap::new();
    for t in transactions {
        for &i in t {
            *singles.entry(i).or_default() += 1;
        }
    }
    let mut level: Vec<Itemset> = singles
        .into_iter()
        .filter(|&(_, c)| is_frequent(c, n, min_support))
        .map(|(i, count)| Itemset { items: vec![i], count })
        .collect();
    level.sort_by(|a, b| a.items.cmp(&b.items));
    let mut all = Vec::new();
    while !level.is_empty() {
        let known: std::collections::HashSet<&[usize]> = level.iter().map(|s| s.items.as_slice()).collect();
        let mut next = Vec::new();
        for (a, x) in level.iter().enumerate() {
            for y in &level[a + 1..] {
                let k = x.items.len();
                if x.items[..k - 1] != y.items[..k - 1] {
                    break;
                }
                let mut cand = x.items.clone();
                cand.push(y.items[k - 1]);
                // every k-subset must already be frequent
                let closed = (0..cand.len()).all(|drop| {
                    let sub: Vec<usize> = cand
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    known.contains(sub.as_slice())
                });
                if !closed {
                    continue;
                }
                let count = transactions.iter().filter(|t| contains_all(t, &cand)).count();
                if is_frequent(count, n, min_support) {
                    next.push(Itemset { items: cand, count });
                }
            }
        }
        all.append(&mut level);
        level = next;
    }
    all
}

/// An association rule over item ids with its quality measures.
#[derive(Clone, Debug, PartialEq)]
pub struct RawRule {
    pub antecedent: Vec<usize>,
    pub consequent: Vec<usize>,
    pub support: f64,
    pub confidence: f64,
    pub lift: f64,
    pub leverage: f64,
    pub conviction: f64,
}

/// Measures of `A → C` from the counts of A, C and A ∪ C over `n`
/// transactions. Conviction is infinite at confidence 1.
pub fn measures(count_a: usize, count_c: usize, count_ac: usize, n: usize) -> (f64, f64, f64, f64, f64) {
    let n = n as f64;
    let (sa, sc, sac) = (count_a as f64 / n, count_c as f64 / n, count_ac as f64 / n);
    let confidence = count_ac as f64 / count_a as f64;
    let lift = confidence / sc;
    let leverage = sac - sa * sc;
    let conviction = if count_ac == count_a {
        f64::INFINITY
    } else {
        (1.0 - sc) / (1.0 - confidence)
    };
    (sac, confidence, lift, leverage, conviction)
}

/// Rules `A → C` with non-empty `A` and `C` partitioning a frequent
/// itemset, kept when `accept(C)` holds and confidence reaches
/// `min_confidence`.
pub fn generate_rules(
    frequent: &[Itemset],
    n_transactions: usize,
    min_confidence: f64,
    accept: impl Fn(&[usize]) -> bool,
) -> Vec<RawRule> {
    let counts: HashMap<&[usize], usize> = frequent.iter().map(|s| (s.items.as_slice(), s.count)).collect();
    let mut rules = Vec::new();
    for set in frequent.iter().filter(|s| s.items.len() >= 2) {
        let m = set.items.len();
        for mask in 1..(1u64 << m) - 1 {
            let (mut a, mut c) = (Vec::new(), Vec::new());
            for (j, &item) in set.items.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    c.push(item);
                } else {
                    a.push(item);
                }
            }
            if !accept(&c) {
                continue;
            }
            let (support, confidence, lift, leverage, conviction) =
                measures(counts[a.as_slice()], counts[c.as_slice()], set.count, n_transactions);
            if confidence >= min_confidence - 1e-12 {
                rules.push(RawRule {
                    antecedent: a,
                    consequent: c,
                    support,
                    confidence,
                    lift,
                    leverage,
                    conviction,
                });
            }
        }
    }
    rules
}
