#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rebalance::profile::Profile;
use rebalance::{Class, Dataset};

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Published per-dataset meta-features, keyed by dataset name.
pub fn table1() -> Vec<(String, Profile)> {
    let mut rdr = csv::Reader::from_path(fixture("table1.csv")).unwrap();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            let f = |i: usize| r[i].parse::<f64>().unwrap();
            (
                r[0].to_string(),
                Profile {
                    n_instances: f(1) as usize,
                    n_attributes: f(2) as usize,
                    imbalance_ratio: f(3),
                    borderline_pct: f(4),
                    overlap_pct: f(5),
                    minority_label: String::new(),
                },
            )
        })
        .collect()
}

pub fn table1_row(name: &str) -> Profile {
    table1()
        .into_iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, p)| p)
        .unwrap_or_else(|| panic!("{name} not in table"))
}

/// Random labelled points in the unit cube. Rows 0 and 1 pin every column
/// to the range [0, 1] so min-max normalisation is the identity and
/// oracles can work on raw values.
pub fn unit_cube(seed: u64, n: usize, p: usize, minority_frac: f64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<f64>> = (0..n).map(|_| (0..p).map(|_| rng.random::<f64>()).collect()).collect();
    rows[0] = vec![0.0; p];
    rows[1] = vec![1.0; p];
    let n_min = ((n as f64 * minority_frac).round() as usize).clamp(2, n / 2);
    let mut labels = vec![Class::Majority; n];
    let mut placed = 0;
    while placed < n_min {
        let i = rng.random_range(0..n);
        if labels[i] == Class::Majority {
            labels[i] = Class::Minority;
            placed += 1;
        }
    }
    Dataset::from_classes(rows, labels).unwrap()
}

pub fn sq(d: &Dataset, a: usize, b: usize) -> f64 {
    d.row(a).iter().zip(d.row(b)).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indices of `candidates` sorted by (distance to `q`, index).
pub fn by_distance(d: &Dataset, q: usize, candidates: &[usize]) -> Vec<usize> {
    let mut c: Vec<usize> = candidates.iter().copied().filter(|&j| j != q).collect();
    c.sort_by(|&a, &b| sq(d, q, a).total_cmp(&sq(d, q, b)).then(a.cmp(&b)));
    c
}

pub fn majority_vote(d: &Dataset, nn: &[usize]) -> Class {
    let min = nn.iter().filter(|&&j| d.label(j) == Class::Minority).count();
    if 2 * min >= nn.len() {
        Class::Minority
    } else {
        Class::Majority
    }
}

/// Cross-class pairs among `members` with no member strictly closer to
/// either end.
pub fn brute_tomek(d: &Dataset, members: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (x, &a) in members.iter().enumerate() {
        for &b in &members[x + 1..] {
            if d.label(a) == d.label(b) {
                continue;
            }
            let dab = sq(d, a, b);
            let blocked = members
                .iter()
                .any(|&c| c != a && c != b && (sq(d, a, c) < dab || sq(d, b, c) < dab));
            if !blocked {
                out.push((a.min(b), a.max(b)));
            }
        }
    }
    out.sort_unstable();
    out
}
