use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Metric;
use crate::rng::Rng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub samples: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            alpha: 0.05,
            seed: 12345,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub metric: String,
    pub score_a: f64,
    pub score_b: f64,
    /// Fraction of resamples in which system A scored strictly higher.
    pub p_a_better: f64,
    pub p_b_better: f64,
    pub significant: bool,
    pub samples: usize,
    pub alpha: f64,
    pub seed: u64,
}

/// Paired bootstrap resampling over segment indices.
///
/// Each resample draws `n` indices with replacement and scores both systems
/// on the same indices. The difference is significant when one system wins
/// in at least `1 - alpha` of the resamples.
pub fn paired_bootstrap<A: AsRef<str>, B: AsRef<str>, R: AsRef<str>>(
    sys_a: &[A],
    sys_b: &[B],
    refs: &[R],
    metric: &Metric,
    cfg: &BootstrapConfig,
) -> Result<BootstrapResult> {
    if sys_a.len() != refs.len() {
        return Err(Error::LengthMismatch(sys_a.len(), refs.len()));
    }
    if sys_b.len() != refs.len() {
        return Err(Error::LengthMismatch(sys_b.len(), refs.len()));
    }
    if cfg.samples < 1 {
        return Err(Error::Config(String::from("bootstrap needs at least one sample")));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::Config(String::from("alpha must lie in (0, 1)")));
    }
    if refs.is_empty() {
        return Err(Error::InsufficientData(String::from("no segments to resample")));
    }
    let stats_a: Vec<Vec<u64>> = sys_a
        .iter()
        .zip(refs)
        .map(|(h, r)| metric.segment_stats(h.as_ref(), r.as_ref()))
        .collect();
    let stats_b: Vec<Vec<u64>> = sys_b
        .iter()
        .zip(refs)
        .map(|(h, r)| metric.segment_stats(h.as_ref(), r.as_ref()))
        .collect();
    let width = metric.stats_len();
    let sum_over = |stats: &[Vec<u64>], indices: &mut dyn Iterator<Item = usize>| {
        let mut total = alloc::vec![0u64; width];
        for i in indices {
            for (acc, s) in total.iter_mut().zip(&stats[i]) {
                *acc += s;
            }
        }
        total
    };

    let n = refs.len();
    let score_a = metric.score(&sum_over(&stats_a, &mut (0..n)));
    let score_b = metric.score(&sum_over(&stats_b, &mut (0..n)));

    let mut rng = Rng::new(cfg.seed);
    let mut indices = alloc::vec![0usize; n];
    let (mut wins_a, mut wins_b) = (0usize, 0usize);
    for _ in 0..cfg.samples {
        for slot in indices.iter_mut() {
            *slot = rng.below(n);
        }
        let a = metric.score(&sum_over(&stats_a, &mut indices.iter().copied()));
        let b = metric.score(&sum_over(&stats_b, &mut indices.iter().copied()));
        if a > b {
            wins_a += 1;
        } else if b > a {
            wins_b += 1;
        }
    }
    let p_a_better = wins_a as f64 / cfg.samples as f64;
    let p_b_better = wins_b as f64 / cfg.samples as f64;
    Ok(BootstrapResult {
        metric: String::from(metric.name()),
        score_a,
        score_b,
        p_a_better,
        p_b_better,
        significant: p_a_better >= 1.0 - cfg.alpha || p_b_better >= 1.0 - cfg.alpha,
        samples: cfg.samples,
        alpha: cfg.alpha,
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{BleuConfig, ChrfConfig};

    const REFS: [&str; 4] = [
        "the cat sat on the mat",
        "a dog ran home fast",
        "birds fly south in winter",
        "it rains a lot today",
    ];

    #[test]
    fn identical_systems_are_not_significant() {
        let cfg = BootstrapConfig::default();
        let r = paired_bootstrap(&REFS, &REFS, &REFS, &Metric::Chrf(ChrfConfig::default()), &cfg).unwrap();
        assert!(!r.significant);
        assert_eq!(r.p_a_better, 0.0);
        assert_eq!(r.p_b_better, 0.0);
    }

    #[test]
    fn perfect_beats_empty_every_time() {
        let empty = ["", "", "", ""];
        let cfg = BootstrapConfig::default();
        for metric in [Metric::Chrf(ChrfConfig::default()), Metric::Bleu(BleuConfig::default())] {
            let r = paired_bootstrap(&REFS, &empty, &REFS, &metric, &cfg).unwrap();
            assert!(r.significant);
            assert_eq!(r.p_a_better, 1.0);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let sys = [
            "the cat sat on a mat",
            "a dog ran home",
            "birds fly north in winter",
            "it rains today",
        ];
        let cfg = BootstrapConfig {
            samples: 200,
            alpha: 0.05,
            seed: 7,
        };
        let metric = Metric::Chrf(ChrfConfig::default());
        let a = paired_bootstrap(&sys, &REFS, &REFS, &metric, &cfg).unwrap();
        let b = paired_bootstrap(&sys, &REFS, &REFS, &metric, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn length_and_config_errors() {
        let metric = Metric::Chrf(ChrfConfig::default());
        let cfg = BootstrapConfig::default();
        assert!(matches!(
            paired_bootstrap(&REFS[..2], &REFS, &REFS, &metric, &cfg),
            Err(Error::LengthMismatch(2, 4))
        ));
        let bad = BootstrapConfig { alpha: 1.0, ..cfg };
        assert!(paired_bootstrap(&REFS, &REFS, &REFS, &metric, &bad).is_err());
    }
}
