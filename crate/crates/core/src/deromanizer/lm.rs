use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;

use serde::{Deserialize, Serialize};

/// End-of-sentence symbol in the count tables.
pub const END: char = '\u{0}';

/// Character k-gram model with add-α smoothing.
///
/// `P(c | h) = (count(h, c) + α) / (count(h) + α·V)` where `h` is the previous
/// `order - 1` characters (fewer at the start of a sentence) and `V` is the
/// number of distinct predicted symbols plus one for unseen ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "LmCounts", into = "LmCounts")]
pub struct CharLm {
    order: usize,
    counts: BTreeMap<String, BTreeMap<char, u64>>,
    totals: BTreeMap<String, u64>,
    vocab_size: usize,
}

#[derive(Serialize, Deserialize)]
struct LmCounts {
    order: usize,
    counts: BTreeMap<String, BTreeMap<char, u64>>,
}

impl From<LmCounts> for CharLm {
    fn from(raw: LmCounts) -> Self {
        let mut lm = CharLm {
            order: raw.order.max(1),
            counts: raw.counts,
            totals: BTreeMap::new(),
            vocab_size: 1,
        };
        lm.finish();
        lm
    }
}

impl From<CharLm> for LmCounts {
    fn from(lm: CharLm) -> Self {
        LmCounts {
            order: lm.order,
            counts: lm.counts,
        }
    }
}

impl CharLm {
    pub fn new(order: usize) -> Self {
        Self {
            order: order.max(1),
            counts: BTreeMap::new(),
            totals: BTreeMap::new(),
            vocab_size: 1,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn add_sentence(&mut self, text: &str) {
        let mut history = String::new();
        for c in text.chars().chain(core::iter::once(END)) {
            *self.counts.entry(history.clone()).or_default().entry(c).or_default() += 1;
            self.advance(&mut history, c);
        }
    }

    /// Recomputes the derived totals after counting.
    pub fn finish(&mut self) {
        let mut vocab = BTreeSet::new();
        self.totals = self
            .counts
            .iter()
            .map(|(h, next)| {
                vocab.extend(next.keys().copied());
                (h.clone(), next.values().sum())
            })
            .collect();
        self.vocab_size = vocab.len() + 1;
    }

    /// Appends `c` to `history` and trims it to the model's context length.
    pub fn advance(&self, history: &mut String, c: char) {
        if self.order == 1 {
            return;
        }
        history.push(c);
        if history.chars().count() > self.order - 1 {
            let first = history.chars().next().map_or(0, char::len_utf8);
            history.drain(..first);
        }
    }

    pub fn log_prob(&self, history: &str, c: char, alpha: f64) -> f64 {
        let v = self.vocab_size as f64;
        let (count, total) = match self.counts.get(history) {
            Some(next) => (
                next.get(&c).copied().unwrap_or(0) as f64,
                self.totals.get(history).copied().unwrap_or(0) as f64,
            ),
            None => (0.0, 0.0),
        };
        libm::log((count + alpha) / (total + alpha * v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribution_sums_to_one_for_every_history() {
        let mut lm = CharLm::new(3);
        lm.add_sentence("abab");
        lm.add_sentence("abc");
        lm.finish();
        let symbols = ['a', 'b', 'c', END];
        for history in ["", "a", "ab", "ba", "zz"] {
            let seen: f64 = symbols.iter().map(|&c| libm::exp(lm.log_prob(history, c, 0.1))).sum();
            // one unit of mass is reserved for unseen symbols
            let unseen = libm::exp(lm.log_prob(history, 'q', 0.1));
            assert!((seen + unseen - 1.0).abs() < 1e-12, "{history}: {seen} + {unseen}");
        }
    }

    #[test]
    fn history_is_trimmed() {
        let lm = CharLm::new(3);
        let mut h = String::new();
        for c in "abcd".chars() {
            lm.advance(&mut h, c);
        }
        assert_eq!(h, "cd");
        let unigram = CharLm::new(1);
        let mut h = String::new();
        unigram.advance(&mut h, 'x');
        assert_eq!(h, "");
    }

    #[test]
    fn add_alpha_by_hand() {
        let mut lm = CharLm::new(2);
        lm.add_sentence("aab");
        lm.finish();
        // symbols a, b, END -> V = 4; after 'a': a:1, b:1
        let p = libm::exp(lm.log_prob("a", 'b', 0.5));
        assert!((p - 1.5 / 4.0).abs() < 1e-12);
    }
}
