use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothing {
    /// Each zero-match order halves the pseudo-count: the k-th such order
    /// gets precision `1 / (2^k · total_n)`.
    #[default]
    Exp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tokenizer {
    #[default]
    #[serde(rename = "13a")]
    Thirteen13a,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BleuConfig {
    pub max_n: usize,
    pub smoothing: Smoothing,
    pub tokenizer: Tokenizer,
}

impl Default for BleuConfig {
    fn default() -> Self {
        Self {
            max_n: 4,
            smoothing: Smoothing::Exp,
            tokenizer: Tokenizer::Thirteen13a,
        }
    }
}

fn is_isolated_symbol(c: char) -> bool {
    matches!(c, '{'..='~' | '['..='`' | ' '..='&' | '('..='+' | ':'..='@' | '/')
}

/// mteval-v13a style tokenization: symbols are split off, periods and
/// commas are split unless they sit between two digits, and a dash
/// following a digit is split.
pub fn tokenize_13a(line: &str) -> Vec<String> {
    let mut text = line.replace("<skipped>", "").replace("-\n", "").replace('\n', " ");
    if text.contains('&') {
        text = text
            .replace("&quot;", "\"")
            .replace("&amp;", "&")
            .replace("&lt;", "<")
            .replace("&gt;", ">");
    }
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len() * 2);
    for (i, &c) in chars.iter().enumerate() {
        let prev = if i > 0 { chars[i - 1] } else { ' ' };
        let next = chars.get(i + 1).copied().unwrap_or(' ');
        let split = is_isolated_symbol(c)
            || (matches!(c, '.' | ',') && !(prev.is_ascii_digit() && next.is_ascii_digit()))
            || (c == '-' && prev.is_ascii_digit());
        if split {
            out.push(' ');
            out.push(c);
            out.push(' ');
        } else {
            out.push(c);
        }
    }
    out.split_whitespace().map(String::from).collect()
}

/// Sufficient statistics: `[hyp_len, ref_len, matches_1..N, totals_1..N]`.
pub fn bleu_stats(hyp: &str, reference: &str, cfg: &BleuConfig) -> Vec<u64> {
    let n = cfg.max_n;
    let hyp = tokenize_13a(hyp);
    let reference = tokenize_13a(reference);
    let mut stats = alloc::vec![0u64; 2 + 2 * n];
    stats[0] = hyp.len() as u64;
    stats[1] = reference.len() as u64;
    for order in 1..=n {
        if hyp.len() < order {
            continue;
        }
        let mut ref_counts: BTreeMap<&[String], u64> = BTreeMap::new();
        if reference.len() >= order {
            for gram in reference.windows(order) {
                *ref_counts.entry(gram).or_default() += 1;
            }
        }
        let mut hyp_counts: BTreeMap<&[String], u64> = BTreeMap::new();
        for gram in hyp.windows(order) {
            *hyp_counts.entry(gram).or_default() += 1;
        }
        stats[1 + order] = hyp_counts
            .iter()
            .map(|(gram, &c)| c.min(ref_counts.get(gram).copied().unwrap_or(0)))
            .sum();
        stats[1 + n + order] = (hyp.len() + 1 - order) as u64;
    }
    stats
}

/// Corpus BLEU from summed statistics.
///
/// An empty hypothesis side scores 0 (brevity penalty 0). If some order has
/// no hypothesis n-grams at all, its precision is 0 and so is the score.
pub fn bleu_from_stats(stats: &[u64], cfg: &BleuConfig) -> f64 {
    let n = cfg.max_n;
    let (hyp_len, ref_len) = (stats[0], stats[1]);
    if hyp_len == 0 {
        return 0.0;
    }
    let mut log_sum = 0.0;
    let mut smooth = 1.0;
    for order in 1..=n {
        let (matches, total) = (stats[1 + order], stats[1 + n + order]);
        if total == 0 {
            return 0.0;
        }
        let precision = if matches == 0 {
            match cfg.smoothing {
                Smoothing::Exp => {
                    smooth *= 2.0;
                    1.0 / (smooth * total as f64)
                }
            }
        } else {
            matches as f64 / total as f64
        };
        log_sum += libm::log(precision);
    }
    let brevity = if hyp_len < ref_len {
        libm::exp(1.0 - ref_len as f64 / hyp_len as f64)
    } else {
        1.0
    };
    100.0 * brevity * libm::exp(log_sum / n as f64)
}

pub fn bleu<H: AsRef<str>, R: AsRef<str>>(hyps: &[H], refs: &[R], cfg: &BleuConfig) -> Result<f64> {
    if hyps.len() != refs.len() {
        return Err(Error::LengthMismatch(hyps.len(), refs.len()));
    }
    let mut total = alloc::vec![0u64; 2 + 2 * cfg.max_n];
    for (h, r) in hyps.iter().zip(refs) {
        for (acc, s) in total.iter_mut().zip(bleu_stats(h.as_ref(), r.as_ref(), cfg)) {
            *acc += s;
        }
    }
    Ok(bleu_from_stats(&total, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize_13a(s)
    }

    #[test]
    fn tokenizer_rules() {
        assert_eq!(toks("Hello, world!"), ["Hello", ",", "world", "!"]);
        assert_eq!(
            toks("pi is 3.14, e is 2.72."),
            ["pi", "is", "3.14", ",", "e", "is", "2.72", "."]
        );
        assert_eq!(toks("1990-2000 (approx)"), ["1990", "-", "2000", "(", "approx", ")"]);
        assert_eq!(toks("well-known don't"), ["well-known", "don't"]);
        assert_eq!(toks("a &amp; b"), ["a", "&", "b"]);
        assert_eq!(toks("http://x.y"), ["http", ":", "/", "/", "x", ".", "y"]);
    }

    #[test]
    fn identical_is_100() {
        let cfg = BleuConfig::default();
        let x = ["the cat sat on the mat", "a b c d e"];
        assert!((bleu(&x, &x, &cfg).unwrap() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn empty_hypotheses_score_zero() {
        let cfg = BleuConfig::default();
        assert_eq!(bleu(&["", ""], &["a b c d", "e f g h"], &cfg).unwrap(), 0.0);
    }

    #[test]
    fn exp_smoothing_by_hand() {
        // hyp "a b c d e", ref "a b c x e": 1-gram 4/5, 2-gram 2/4, 3-gram 1/3, 4-gram 0/2
        let cfg = BleuConfig::default();
        let got = bleu(&["a b c d e"], &["a b c x e"], &cfg).unwrap();
        let p4 = 1.0 / (2.0 * 2.0);
        let expected =
            100.0 * libm::exp((libm::log(0.8) + libm::log(0.5) + libm::log(1.0 / 3.0) + libm::log(p4)) / 4.0);
        assert!((got - expected).abs() < 1e-9);
        assert!(got > 0.0);
    }

    #[test]
    fn brevity_penalty_applies() {
        let cfg = BleuConfig::default();
        let got = bleu(&["a b c d"], &["a b c d e f"], &cfg).unwrap();
        assert!((got - 100.0 * libm::exp(1.0 - 6.0 / 4.0)).abs() < 1e-9);
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            bleu(&["a"], &[] as &[&str], &BleuConfig::default()),
            Err(Error::LengthMismatch(1, 0))
        );
    }
}
