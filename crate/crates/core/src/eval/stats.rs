//! Rank statistics: mid-ranks, the Friedman test and the Nemenyi critical
//! difference.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Ranks one block, 1 = best. Ties share the mean of the ranks they span.
pub fn rank_block(values: &[f64], higher_is_better: bool) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let c = values[a].total_cmp(&values[b]);
        if higher_is_better {
            c.reverse()
        } else {
            c
        }
    });
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let mid = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mid;
        }
        start = end;
    }
    ranks
}

pub fn rank_blocks(blocks: &[Vec<f64>], higher_is_better: bool) -> Vec<Vec<f64>> {
    blocks.iter().map(|b| rank_block(b, higher_is_better)).collect()
}

/// Column means of an N × k rank matrix.
pub fn average_ranks(ranks: &[Vec<f64>]) -> Vec<f64> {
    let k = ranks.first().map_or(0, Vec::len);
    let n = ranks.len() as f64;
    (0..k).map(|j| ranks.iter().map(|r| r[j]).sum::<f64>() / n).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Friedman {
    pub statistic: f64,
    pub p_value: f64,
    pub df: usize,
}

/// Friedman χ² over an N × k rank matrix:
/// `12N / (k(k+1)) · (Σ R̄ⱼ² − k(k+1)²/4)`, with the p-value from the
/// chi-squared distribution on k − 1 degrees of freedom.
pub fn friedman(ranks: &[Vec<f64>]) -> Result<Friedman> {
    let n = ranks.len();
    let k = ranks.first().map_or(0, Vec::len);
    if n < 2 || k < 2 {
        return Err(Error::InvalidConfig(format!(
            "Friedman test needs at least 2 blocks and 2 treatments, got N = {n}, k = {k}"
        )));
    }
    if ranks.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidConfig("ragged rank matrix".into()));
    }
    let kf = k as f64;
    let sum_sq: f64 = average_ranks(ranks).iter().map(|r| r * r).sum();
    let statistic = (12.0 * n as f64 / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0).powi(2) / 4.0)).max(0.0);
    let chi = ChiSquared::new((k - 1) as f64).expect("positive degrees of freedom");
    Ok(Friedman {
        statistic,
        p_value: chi.sf(statistic).clamp(0.0, 1.0),
        df: k - 1,
    })
}

// Studentized range statistic divided by √2, for k = 2..=10.
const Q_05: [f64; 9] = [1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164];
const Q_10: [f64; 9] = [1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920];

pub fn nemenyi_q(k: usize, alpha: f64) -> Result<f64> {
    let table = if alpha == 0.05 {
        &Q_05
    } else if alpha == 0.10 {
        &Q_10
    } else {
        return Err(Error::InvalidConfig(format!("no Nemenyi table for alpha = {alpha}")));
    };
    if !(2..=10).contains(&k) {
        return Err(Error::InvalidConfig(format!("Nemenyi table covers k = 2..=10, got {k}")));
    }
    Ok(table[k - 2])
}

/// Critical difference `q_α(k) · √(k(k+1) / (6N))`.
pub fn nemenyi_cd(k: usize, n: usize, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidConfig("Nemenyi needs at least one block".into()));
    }
    let kf = k as f64;
    Ok(nemenyi_q(k, alpha)? * (kf * (kf + 1.0) / (6.0 * n as f64)).sqrt())
}
