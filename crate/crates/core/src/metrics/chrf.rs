use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChrfConfig {
    pub max_n: usize,
    pub beta: f64,
    pub whitespace_removed: bool,
}

impl Default for ChrfConfig {
    fn default() -> Self {
        Self {
            max_n: 6,
            beta: 2.0,
            whitespace_removed: true,
        }
    }
}

impl ChrfConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_n < 1 {
            return Err(Error::Config(String::from("chrF max_n must be at least 1")));
        }
        if !(self.beta > 0.0) {
            return Err(Error::Config(String::from("chrF beta must be positive")));
        }
        Ok(())
    }
}

/// Sufficient statistics for chrF, laid out as
/// `[hyp_1..hyp_N, ref_1..ref_N, match_1..match_N]`: n-gram totals on each
/// side and clipped matches, per order. Statistics add across segments.
pub fn chrf_stats(hyp: &str, reference: &str, cfg: &ChrfConfig) -> Vec<u64> {
    let n = cfg.max_n;
    let keep = |c: &char| !(cfg.whitespace_removed && c.is_whitespace());
    let hyp: Vec<char> = hyp.chars().filter(keep).collect();
    let reference: Vec<char> = reference.chars().filter(keep).collect();
    let mut stats = alloc::vec![0u64; 3 * n];
    for order in 1..=n {
        let hyp_grams = ngram_counts(&hyp, order);
        let ref_grams = ngram_counts(&reference, order);
        stats[order - 1] = hyp.len().saturating_sub(order - 1) as u64;
        stats[n + order - 1] = reference.len().saturating_sub(order - 1) as u64;
        stats[2 * n + order - 1] = hyp_grams
            .iter()
            .map(|(gram, &count)| count.min(ref_grams.get(gram).copied().unwrap_or(0)))
            .sum();
    }
    stats
}

fn ngram_counts(chars: &[char], order: usize) -> BTreeMap<&[char], u64> {
    let mut counts = BTreeMap::new();
    if chars.len() >= order {
        for gram in chars.windows(order) {
            *counts.entry(gram).or_default() += 1;
        }
    }
    counts
}

/// Scores accumulated statistics.
///
/// Precision and recall are averaged over the orders for which both sides
/// have at least one n-gram, then combined as
/// `100 · (1 + β²) · P · R / (β² · P + R)`. No usable order, or a zero
/// denominator, scores 0.
pub fn chrf_from_stats(stats: &[u64], cfg: &ChrfConfig) -> f64 {
    let n = cfg.max_n;
    let (mut precision, mut recall, mut orders) = (0.0, 0.0, 0usize);
    for i in 0..n {
        let (h, r, m) = (stats[i], stats[n + i], stats[2 * n + i]);
        if h > 0 && r > 0 {
            precision += m as f64 / h as f64;
            recall += m as f64 / r as f64;
            orders += 1;
        }
    }
    if orders == 0 {
        return 0.0;
    }
    precision /= orders as f64;
    recall /= orders as f64;
    let b2 = cfg.beta * cfg.beta;
    let denom = b2 * precision + recall;
    if denom == 0.0 {
        return 0.0;
    }
    100.0 * (1.0 + b2) * precision * recall / denom
}

pub fn chrf_sentence(hyp: &str, reference: &str, cfg: &ChrfConfig) -> f64 {
    chrf_from_stats(&chrf_stats(hyp, reference, cfg), cfg)
}

/// Corpus chrF: statistics are summed over segments before scoring.
pub fn chrf_corpus<H: AsRef<str>, R: AsRef<str>>(hyps: &[H], refs: &[R], cfg: &ChrfConfig) -> Result<f64> {
    if hyps.len() != refs.len() {
        return Err(Error::LengthMismatch(hyps.len(), refs.len()));
    }
    let mut total = alloc::vec![0u64; 3 * cfg.max_n];
    for (h, r) in hyps.iter().zip(refs) {
        for (acc, s) in total.iter_mut().zip(chrf_stats(h.as_ref(), r.as_ref(), cfg)) {
            *acc += s;
        }
    }
    Ok(chrf_from_stats(&total, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_100() {
        let cfg = ChrfConfig::default();
        for x in ["a", "ab", "hello world", "Что там дальше?"] {
            assert_eq!(chrf_sentence(x, x, &cfg), 100.0, "{x}");
        }
    }

    #[test]
    fn disjoint_is_0() {
        assert_eq!(chrf_sentence("ab", "cd", &ChrfConfig::default()), 0.0);
        assert_eq!(chrf_sentence("", "cd", &ChrfConfig::default()), 0.0);
    }

    #[test]
    fn abcd_vs_abce_by_hand() {
        // unigrams: 3 of 4 match both ways; bigrams: ab, bc match, 2 of 3
        let cfg = ChrfConfig {
            max_n: 2,
            beta: 2.0,
            whitespace_removed: true,
        };
        let p = (3.0 / 4.0 + 2.0 / 3.0) / 2.0;
        let expected = 100.0 * 5.0 * p * p / (4.0 * p + p);
        assert!((chrf_sentence("abcd", "abce", &cfg) - expected).abs() < 1e-12);
    }

    #[test]
    fn whitespace_is_ignored_by_default() {
        let cfg = ChrfConfig::default();
        assert_eq!(chrf_sentence("a b c", "abc", &cfg), 100.0);
        let keep = ChrfConfig {
            whitespace_removed: false,
            ..cfg
        };
        assert!(chrf_sentence("a b c", "abc", &keep) < 100.0);
    }

    #[test]
    fn corpus_requires_equal_lengths() {
        assert_eq!(
            chrf_corpus(&["a"], &["a", "b"], &ChrfConfig::default()),
            Err(Error::LengthMismatch(1, 2))
        );
    }

    #[test]
    fn corpus_aggregates_counts_not_scores() {
        let cfg = ChrfConfig::default();
        let corpus = chrf_corpus(&["abcdef", "x"], &["abcdef", "y"], &cfg).unwrap();
        let mean = (chrf_sentence("abcdef", "abcdef", &cfg) + chrf_sentence("x", "y", &cfg)) / 2.0;
        assert!(corpus > mean);
    }
}
