//! Evaluation metrics: chrF, BLEU, paired bootstrap resampling, type counts
//! and character-level overlap.

mod bleu;
mod bootstrap;
mod chrf;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use bleu::{bleu, bleu_from_stats, bleu_stats, tokenize_13a, BleuConfig, Smoothing, Tokenizer};
pub use bootstrap::{paired_bootstrap, BootstrapConfig, BootstrapResult};
pub use chrf::{chrf_corpus, chrf_from_stats, chrf_sentence, chrf_stats, ChrfConfig};

/// A corpus-level score with optional per-segment breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub metric: String,
    pub score: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub segments: Vec<f64>,
}

/// A segment-additive metric: per-segment sufficient statistics are summed
/// and scored once, so resampling never re-tokenizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "snake_case")]
pub enum Metric {
    Chrf(ChrfConfig),
    Bleu(BleuConfig),
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Chrf(_) => "chrF",
            Metric::Bleu(_) => "BLEU",
        }
    }

    pub fn segment_stats(&self, hyp: &str, reference: &str) -> Vec<u64> {
        match self {
            Metric::Chrf(cfg) => chrf_stats(hyp, reference, cfg),
            Metric::Bleu(cfg) => bleu_stats(hyp, reference, cfg),
        }
    }

    pub fn stats_len(&self) -> usize {
        match self {
            Metric::Chrf(cfg) => 3 * cfg.max_n,
            Metric::Bleu(cfg) => 2 + 2 * cfg.max_n,
        }
    }

    pub fn score(&self, stats: &[u64]) -> f64 {
        match self {
            Metric::Chrf(cfg) => chrf_from_stats(stats, cfg),
            Metric::Bleu(cfg) => bleu_from_stats(stats, cfg),
        }
    }

    pub fn corpus<H: AsRef<str>, R: AsRef<str>>(&self, hyps: &[H], refs: &[R]) -> crate::Result<MetricReport> {
        if hyps.len() != refs.len() {
            return Err(crate::Error::LengthMismatch(hyps.len(), refs.len()));
        }
        let mut total = alloc::vec![0u64; self.stats_len()];
        let mut segments = Vec::with_capacity(hyps.len());
        for (h, r) in hyps.iter().zip(refs) {
            let stats = self.segment_stats(h.as_ref(), r.as_ref());
            segments.push(self.score(&stats));
            for (acc, s) in total.iter_mut().zip(stats) {
                *acc += s;
            }
        }
        Ok(MetricReport {
            metric: String::from(self.name()),
            score: self.score(&total),
            segments,
        })
    }
}

/// Number of distinct whitespace-delimited tokens.
pub fn type_count<S: AsRef<str>>(corpus: &[S]) -> usize {
    corpus
        .iter()
        .flat_map(|line| line.as_ref().split_whitespace())
        .collect::<BTreeSet<_>>()
        .len()
}

pub fn token_count<S: AsRef<str>>(corpus: &[S]) -> usize {
    corpus.iter().map(|line| line.as_ref().split_whitespace().count()).sum()
}

/// chrF between two corpora, each joined into a single segment. `corpus_a`
/// is the hypothesis and `corpus_b` the reference, so the score is not
/// symmetric when `beta != 1`.
pub fn char_overlap<A: AsRef<str>, B: AsRef<str>>(corpus_a: &[A], corpus_b: &[B], cfg: &ChrfConfig) -> f64 {
    let join = |lines: &mut dyn Iterator<Item = &str>| lines.collect::<Vec<_>>().join(" ");
    let a = join(&mut corpus_a.iter().map(AsRef::as_ref));
    let b = join(&mut corpus_b.iter().map(AsRef::as_ref));
    chrf_sentence(&a, &b, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_count_examples() {
        assert_eq!(type_count(&["a b a"]), 2);
        assert_eq!(type_count::<&str>(&[]), 0);
        assert_eq!(type_count(&["a  b", "b c"]), 3);
    }

    #[test]
    fn overlap_examples() {
        let cfg = ChrfConfig::default();
        assert_eq!(char_overlap(&["abc", "def"], &["abc", "def"], &cfg), 100.0);
        assert_eq!(char_overlap(&["abc"], &["xyz"], &cfg), 0.0);
        let a = char_overlap(&["abcd"], &["abcdefgh"], &cfg);
        let b = char_overlap(&["abcdefgh"], &["abcd"], &cfg);
        assert!((a - b).abs() > 1.0);
    }

    #[test]
    fn metric_report_matches_direct_scoring() {
        let hyps = ["the cat sat", "on a mat today"];
        let refs = ["the cat sat", "on the mat today"];
        let chrf = Metric::Chrf(ChrfConfig::default()).corpus(&hyps, &refs).unwrap();
        assert_eq!(chrf.score, chrf_corpus(&hyps, &refs, &ChrfConfig::default()).unwrap());
        assert_eq!(chrf.segments.len(), 2);
        assert_eq!(chrf.segments[0], 100.0);
        let b = Metric::Bleu(BleuConfig::default()).corpus(&hyps, &refs).unwrap();
        assert_eq!(b.score, bleu(&hyps, &refs, &BleuConfig::default()).unwrap());
    }
}
