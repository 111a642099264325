use rand::seq::index::sample;
use rand::Rng;

use super::{Resampled, ResampleConfig, StrategyId};
use crate::data::{Class, Dataset};
use crate::error::{Error, Result};
use crate::seed;

/// Random undersampling of the majority class down to
/// `⌈n_min·(1−s)/s⌉` rows, where `s` is the target minority share. If the
/// minority share already reaches `s` the input is returned with a warning.
pub fn rus(d: &Dataset, cfg: &ResampleConfig) -> Result<Resampled> {
    let s = cfg.minority_share;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidConfig(format!("minority share {s} must lie in (0, 1)")));
    }
    let minority = d.indices_of(Class::Minority);
    let majority = d.indices_of(Class::Majority);
    let share = minority.len() as f64 / d.n() as f64;
    if share >= s {
        return Ok(Resampled::unchanged(
            d,
            format!("RUS skipped: minority share {share:.4} already >= {s}"),
        ));
    }
    let target = (minority.len() as f64 * (1.0 - s) / s - 1e-9).ceil() as usize;
    let target = target.min(majority.len());
    let mut rng = seed::stream(cfg.seed, &[StrategyId::Rus.tag()]);
    let mut keep = minority;
    keep.extend(sample(&mut rng, majority.len(), target).into_iter().map(|i| majority[i]));
    Ok(Resampled::keep(d, keep))
}

/// Random oversampling: appends `⌊perc_over/100⌋·n_min` copies of minority
/// rows drawn uniformly with replacement.
pub fn ros(d: &Dataset, cfg: &ResampleConfig) -> Result<Resampled> {
    if cfg.perc_over < 100 {
        return Err(Error::InvalidConfig(format!(
            "ROS needs perc_over >= 100, got {}",
            cfg.perc_over
        )));
    }
    let minority = d.indices_of(Class::Minority);
    if minority.is_empty() {
        return Ok(Resampled::unchanged(d, "ROS skipped: no minority rows".into()));
    }
    let copies = (cfg.perc_over / 100) as usize * minority.len();
    let mut rng = seed::stream(cfg.seed, &[StrategyId::Ros.tag()]);
    let picks: Vec<usize> = (0..copies)
        .map(|_| minority[rng.random_range(0..minority.len())])
        .collect();
    let mut origin: Vec<Option<usize>> = (0..d.n()).map(Some).collect();
    origin.extend(picks.iter().map(|&i| Some(i)));
    let mut all: Vec<usize> = (0..d.n()).collect();
    all.extend(&picks);
    Ok(Resampled {
        dataset: d.select(&all),
        origin,
        warning: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(n_min: usize, n_maj: usize) -> Dataset {
        let labels = std::iter::repeat_n(Class::Minority, n_min)
            .chain(std::iter::repeat_n(Class::Majority, n_maj))
            .collect();
        let rows = (0..n_min + n_maj).map(|i| vec![i as f64, (i * i) as f64]).collect();
        Dataset::from_classes(rows, labels).unwrap()
    }

    #[test]
    fn rus_balances() {
        let d = toy(10, 90);
        let out = rus(&d, &ResampleConfig::default()).unwrap();
        assert_eq!(out.dataset.count(Class::Minority), 10);
        assert_eq!(out.dataset.count(Class::Majority), 10);
        assert!(out.warning.is_none());

        let other = rus(&d, &ResampleConfig { minority_share: 0.25, ..Default::default() }).unwrap();
        assert_eq!(other.dataset.count(Class::Majority), 30);
    }

    #[test]
    fn rus_noop_on_balanced() {
        let d = toy(10, 10);
        let out = rus(&d, &ResampleConfig::default()).unwrap();
        assert_eq!(out.dataset, d);
        assert!(out.warning.is_some());
    }

    #[test]
    fn rus_deterministic_subset() {
        let d = toy(10, 90);
        let cfg = ResampleConfig { seed: 9, ..Default::default() };
        let a = rus(&d, &cfg).unwrap().kept_indices();
        assert_eq!(a, rus(&d, &cfg).unwrap().kept_indices());
        let b = rus(&d, &ResampleConfig { seed: 10, ..Default::default() }).unwrap().kept_indices();
        assert_ne!(a, b);
    }

    #[test]
    fn ros_counts_and_copies() {
        let d = toy(10, 40);
        let out = ros(&d, &ResampleConfig::default()).unwrap();
        assert_eq!(out.dataset.count(Class::Minority), 60);
        assert_eq!(out.dataset.n() - d.n(), 50);
        // the majority rows are untouched and come first in order
        assert_eq!(out.dataset.select(&d.indices_of(Class::Majority)), d.select(&d.indices_of(Class::Majority)));

        let out = ros(&d, &ResampleConfig { perc_over: 100, ..Default::default() }).unwrap();
        for i in d.n()..out.dataset.n() {
            let row = out.dataset.row(i);
            assert!(d.indices_of(Class::Minority).iter().any(|&j| d.row(j) == row));
        }
        assert!(ros(&d, &ResampleConfig { perc_over: 50, ..Default::default() }).is_err());
    }
}
