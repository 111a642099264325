use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Class, ClassNames, Dataset};
use crate::error::{Error, Result};
use crate::seed;

/// Parameters of the two-cluster Gaussian generator.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub n: usize,
    pub p: usize,
    pub informative: usize,
    pub ir_target: f64,
    pub class_sep: f64,
    pub noise_flip_fraction: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            n: 1000,
            p: 5,
            informative: 2,
            ir_target: 10.0,
            class_sep: 2.0,
            noise_flip_fraction: 0.0,
            seed: 0,
        }
    }
}

/// Generator output: the (possibly label-flipped) dataset and the labels
/// each row was drawn with.
#[derive(Clone, Debug)]
pub struct Synthetic {
    pub dataset: Dataset,
    pub true_labels: Vec<Class>,
}

impl Synthetic {
    pub fn flipped(&self) -> usize {
        self.dataset
            .labels()
            .iter()
            .zip(&self.true_labels)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Minority rows first drawn so that majority/minority is as close to
/// `ir_target` as integer counts allow.
fn class_sizes(spec: &SynthSpec) -> Result<(usize, usize)> {
    let n_min = (spec.n as f64 / (1.0 + spec.ir_target)).round() as usize;
    if n_min < 1 {
        return Err(Error::InvalidConfig(format!(
            "n = {} is too small to realise IR {} with at least one minority instance",
            spec.n, spec.ir_target
        )));
    }
    Ok((n_min, spec.n - n_min))
}

pub fn generate(spec: &SynthSpec) -> Result<Synthetic> {
    if spec.p == 0 || spec.informative > spec.p {
        return Err(Error::InvalidConfig(format!(
            "need 1 <= p and informative <= p (p = {}, informative = {})",
            spec.p, spec.informative
        )));
    }
    if !(spec.ir_target >= 1.0 && spec.class_sep > 0.0) {
        return Err(Error::InvalidConfig(
            "ir_target must be >= 1 and class_sep > 0".into(),
        ));
    }
    if !(0.0..1.0).contains(&spec.noise_flip_fraction) {
        return Err(Error::InvalidConfig("noise_flip_fraction must lie in [0, 1)".into()));
    }
    let (n_min, n_maj) = class_sizes(spec)?;

    let mut rng = seed::stream(spec.seed, &[0x5EED]);
    let mut true_labels: Vec<Class> = std::iter::repeat_n(Class::Minority, n_min)
        .chain(std::iter::repeat_n(Class::Majority, n_maj))
        .collect();
    true_labels.shuffle(&mut rng);

    let half = spec.class_sep / 2.0;
    let mut rows = Vec::with_capacity(spec.n);
    for &label in &true_labels {
        let centre = if label.is_minority() { half } else { -half };
        let row = (0..spec.p)
            .map(|j| {
                let z: f64 = rng.sample(StandardNormal);
                if j < spec.informative {
                    centre + z
                } else {
                    z
                }
            })
            .collect();
        rows.push(row);
    }

    let labels: Vec<Class> = true_labels
        .iter()
        .map(|&c| {
            if rng.random::<f64>() < spec.noise_flip_fraction {
                c.other()
            } else {
                c
            }
        })
        .collect();
    let observed_min = labels.iter().filter(|c| c.is_minority()).count();
    if observed_min == 0 || observed_min > spec.n - observed_min {
        return Err(Error::Degenerate(format!(
            "label noise left {observed_min} minority rows out of {}",
            spec.n
        )));
    }

    let names = ClassNames {
        minority: "1".into(),
        majority: "0".into(),
    };
    let feature_names = (1..=spec.p).map(|j| format!("x{j}")).collect();
    let dataset = Dataset::from_rows(rows, labels, names, feature_names)?;
    Ok(Synthetic {
        dataset,
        true_labels,
    })
}

/// Two Gaussian clusters with unit variance centred at ∓class_sep/2 on each
/// informative axis (majority negative, minority positive); the other
/// features are standard-normal noise.
pub fn make_imbalanced(spec: &SynthSpec) -> Result<Dataset> {
    generate(spec).map(|s| s.dataset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn realises_requested_ir() {
        let spec = SynthSpec {
            n: 310,
            ir_target: 30.0,
            ..SynthSpec::default()
        };
        let d = make_imbalanced(&spec).unwrap();
        assert_eq!(d.count(Class::Minority), 10);
        assert_eq!(d.count(Class::Majority), 300);
    }

    #[test]
    fn too_small_for_ir() {
        let spec = SynthSpec {
            n: 10,
            ir_target: 30.0,
            ..SynthSpec::default()
        };
        assert!(make_imbalanced(&spec).is_err());
    }

    #[test]
    fn pure_function_of_spec() {
        let spec = SynthSpec {
            seed: 99,
            noise_flip_fraction: 0.1,
            ..SynthSpec::default()
        };
        assert_eq!(make_imbalanced(&spec).unwrap(), make_imbalanced(&spec).unwrap());
        let other = SynthSpec { seed: 100, ..spec.clone() };
        assert_ne!(make_imbalanced(&spec).unwrap(), make_imbalanced(&other).unwrap());
    }

    #[test]
    fn flip_count_is_binomial() {
        // 1000 draws at p = 0.05: mean 50, sigma = sqrt(47.5) ~ 6.89
        let sigma = (1000.0f64 * 0.05 * 0.95).sqrt();
        for seed in 0..5 {
            let s = generate(&SynthSpec {
                n: 1000,
                ir_target: 3.0,
                noise_flip_fraction: 0.05,
                seed,
                ..SynthSpec::default()
            })
            .unwrap();
            let flips = s.flipped() as f64;
            assert!((flips - 50.0).abs() <= 3.0 * sigma, "seed {seed}: {flips} flips");
        }
    }
}
