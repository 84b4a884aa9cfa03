//! Learned deromanization.
//!
//! A segmental noisy-channel transducer: the romanized input is segmented
//! into codewords seen during training, each codeword is rewritten to an
//! original-script string, and candidates are ranked by
//! `Σ log P(g | s) + λ · Σ log LM(c | history)` with a character k-gram
//! language model over the original script. Training data comes from the same
//! table that romanizes, so alignments are exact.

mod chars;
mod lm;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

pub use chars::{decode_chars, encode_chars, CharEncodingConfig};
pub use lm::{CharLm, END};

use crate::metrics::{chrf_corpus, chrf_sentence, ChrfConfig, MetricReport};
use crate::romanizer::{romanize_aligned, MappingTable, Mode};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeromanizerConfig {
    /// Language-model order k.
    pub order: usize,
    /// Add-α smoothing for both the channel and the language model.
    pub alpha: f64,
    /// Language-model weight λ.
    pub lambda: f64,
    pub beam: usize,
}

impl Default for DeromanizerConfig {
    fn default() -> Self {
        Self {
            order: 5,
            alpha: 0.1,
            lambda: 1.0,
            beam: 8,
        }
    }
}

impl DeromanizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return Err(Error::Config(String::from("language-model order must be at least 1")));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(String::from("alpha must be positive")));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(String::from("lambda must be non-negative")));
        }
        if self.beam < 1 {
            return Err(Error::Config(String::from("beam width must be at least 1")));
        }
        Ok(())
    }
}

/// A (romanized, original) sentence pair, optionally with its alignment as
/// `(codeword, grapheme)` pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingPair {
    pub romanized: String,
    pub original: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alignment: Option<Vec<(String, String)>>,
}

impl TrainingPair {
    pub fn unaligned(romanized: &str, original: &str) -> Self {
        Self {
            romanized: String::from(romanized),
            original: String::from(original),
            alignment: None,
        }
    }
}

pub fn make_training_pairs<S: AsRef<str>>(corpus: &[S], table: &MappingTable, mode: Mode) -> Result<Vec<TrainingPair>> {
    corpus
        .iter()
        .map(|sentence| {
            let pieces = romanize_aligned(sentence.as_ref(), table, mode)?;
            Ok(TrainingPair {
                romanized: pieces.iter().map(|(r, _)| r.as_str()).collect(),
                original: pieces.iter().map(|(_, o)| o.as_str()).collect(),
                alignment: Some(pieces),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeromanizerModel {
    pub config: DeromanizerConfig,
    /// Fingerprint of the table and mode that produced the training data.
    pub table_fingerprint: Option<String>,
    pub codewords: Vec<String>,
    /// `channel[s][g]`: how often codeword `s` was produced by original `g`.
    pub channel: BTreeMap<String, BTreeMap<String, u64>>,
    pub lm: CharLm,
}

/// Estimates a model from aligned pairs.
///
/// Pairs without an alignment are re-aligned by romanizing their original side
/// with `table`; the result must reproduce the romanized side exactly.
/// Original graphemes that romanize to nothing (deletions) are attached to
/// the neighbouring codeword so that every codeword is non-empty.
pub fn train_deromanizer(
    pairs: &[TrainingPair],
    config: DeromanizerConfig,
    table: Option<(&MappingTable, Mode)>,
) -> Result<DeromanizerModel> {
    config.validate()?;
    if pairs.is_empty() {
        return Err(Error::InsufficientData(String::from("no training pairs")));
    }
    let mut channel: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    let mut lm = CharLm::new(config.order);
    for (index, pair) in pairs.iter().enumerate() {
        let alignment = match (&pair.alignment, table) {
            (Some(alignment), _) => {
                check_alignment(pair, alignment, index)?;
                alignment.clone()
            }
            (None, Some((table, mode))) => {
                let pieces = romanize_aligned(&pair.original, table, mode)?;
                let romanized: String = pieces.iter().map(|(r, _)| r.as_str()).collect();
                if romanized != pair.romanized.nfc().collect::<String>() {
                    return Err(Error::Alignment { index });
                }
                pieces
            }
            (None, None) => {
                return Err(Error::Config(alloc::format!(
                    "sentence {index} has no alignment and no table was given to re-align it"
                )))
            }
        };
        for (codeword, grapheme) in channel_units(alignment) {
            *channel.entry(codeword).or_default().entry(grapheme).or_default() += 1;
        }
        let original: String = pair.original.nfc().collect();
        lm.add_sentence(&original);
    }
    lm.finish();
    Ok(DeromanizerModel {
        config,
        table_fingerprint: table.map(|(t, mode)| t.fingerprint(mode)),
        codewords: channel.keys().cloned().collect(),
        channel,
        lm,
    })
}

fn check_alignment(pair: &TrainingPair, alignment: &[(String, String)], index: usize) -> Result<()> {
    let romanized: String = alignment.iter().map(|(r, _)| r.as_str()).collect();
    let original: String = alignment.iter().map(|(_, o)| o.as_str()).collect();
    if romanized != pair.romanized || original != pair.original {
        return Err(Error::Alignment { index });
    }
    Ok(())
}

/// Folds empty codewords into the preceding unit (or the following one at
/// the start of a sentence).
fn channel_units(alignment: Vec<(String, String)>) -> Vec<(String, String)> {
    let mut units: Vec<(String, String)> = Vec::with_capacity(alignment.len());
    let mut pending = String::new();
    for (codeword, grapheme) in alignment {
        if codeword.is_empty() {
            match units.last_mut() {
                Some(last) => last.1.push_str(&grapheme),
                None => pending.push_str(&grapheme),
            }
        } else {
            let grapheme = if pending.is_empty() {
                grapheme
            } else {
                let mut g = core::mem::take(&mut pending);
                g.push_str(&grapheme);
                g
            };
            units.push((codeword, grapheme));
        }
    }
    units
}

impl DeromanizerModel {
    /// `P(g | s)` with add-α smoothing over the graphemes observed for `s`.
    pub fn channel_prob(&self, codeword: &str, grapheme: &str) -> f64 {
        let Some(outcomes) = self.channel.get(codeword) else {
            return 0.0;
        };
        let total: u64 = outcomes.values().sum();
        let count = outcomes.get(grapheme).copied().unwrap_or(0);
        if count == 0 {
            return 0.0;
        }
        let alpha = self.config.alpha;
        (count as f64 + alpha) / (total as f64 + alpha * outcomes.len() as f64)
    }

    pub fn decoder(&self) -> Decoder<'_> {
        Decoder::new(self)
    }
}

/// Beam-search decoder over a trained model.
pub struct Decoder<'a> {
    model: &'a DeromanizerModel,
    candidates: BTreeMap<&'a str, Vec<(&'a str, f64)>>,
    max_codeword_chars: usize,
}

#[derive(Clone)]
struct Hypothesis {
    score: f64,
    output: String,
    history: String,
}

fn rank(a: &Hypothesis, b: &Hypothesis) -> Ordering {
    b.score.total_cmp(&a.score).then_with(|| a.output.cmp(&b.output))
}

impl<'a> Decoder<'a> {
    pub fn new(model: &'a DeromanizerModel) -> Self {
        let mut candidates = BTreeMap::new();
        let mut max_codeword_chars = 0;
        for (codeword, outcomes) in &model.channel {
            max_codeword_chars = max_codeword_chars.max(codeword.chars().count());
            let options = outcomes
                .keys()
                .map(|g| (g.as_str(), libm::log(model.channel_prob(codeword, g))))
                .collect();
            candidates.insert(codeword.as_str(), options);
        }
        Self {
            model,
            candidates,
            max_codeword_chars,
        }
    }

    pub fn decode(&self, text: &str) -> String {
        let text: String = text.nfc().collect();
        let bounds: Vec<usize> = text
            .char_indices()
            .map(|(i, _)| i)
            .chain(core::iter::once(text.len()))
            .collect();
        let n = bounds.len() - 1;
        let cfg = &self.model.config;
        let lm = &self.model.lm;

        let mut chart: Vec<Vec<Hypothesis>> = (0..=n).map(|_| Vec::new()).collect();
        chart[0].push(Hypothesis {
            score: 0.0,
            output: String::new(),
            history: String::new(),
        });
        for i in 0..n {
            let beam = prune(core::mem::take(&mut chart[i]), cfg.beam);
            let mut options: Vec<(usize, &str, f64)> = Vec::new();
            for len in 1..=self.max_codeword_chars.min(n - i) {
                if let Some(outs) = self.candidates.get(&text[bounds[i]..bounds[i + len]]) {
                    options.extend(outs.iter().map(|&(g, lp)| (len, g, lp)));
                }
            }
            if !options.iter().any(|&(len, _, _)| len == 1) {
                // unknown material passes through unchanged
                options.push((1, &text[bounds[i]..bounds[i + 1]], 0.0));
            }
            for hyp in &beam {
                for &(len, grapheme, channel_lp) in &options {
                    let mut next = hyp.clone();
                    let mut lm_lp = 0.0;
                    for c in grapheme.chars() {
                        lm_lp += lm.log_prob(&next.history, c, cfg.alpha);
                        lm.advance(&mut next.history, c);
                    }
                    next.score += channel_lp + cfg.lambda * lm_lp;
                    next.output.push_str(grapheme);
                    chart[i + len].push(next);
                }
            }
            chart[i] = beam;
        }
        let mut finals = core::mem::take(&mut chart[n]);
        for hyp in &mut finals {
            hyp.score += cfg.lambda * lm.log_prob(&hyp.history, END, cfg.alpha);
        }
        finals.sort_by(rank);
        finals.into_iter().next().map(|h| h.output).unwrap_or_default()
    }
}

/// Keeps the best hypothesis per language-model history, then the top `beam`.
fn prune(mut hyps: Vec<Hypothesis>, beam: usize) -> Vec<Hypothesis> {
    hyps.sort_by(rank);
    let mut seen = BTreeSet::new();
    hyps.retain(|h| seen.insert(h.history.clone()));
    hyps.truncate(beam);
    hyps
}

pub fn deromanize(model: &DeromanizerModel, text: &str) -> String {
    model.decoder().decode(text)
}

/// Deromanizes every romanized side and scores it against the original with
/// chrF; the report carries the corpus score and per-sentence scores.
pub fn evaluate_deromanization(model: &DeromanizerModel, test_pairs: &[TrainingPair]) -> MetricReport {
    let decoder = model.decoder();
    let hyps: Vec<String> = test_pairs.iter().map(|p| decoder.decode(&p.romanized)).collect();
    score_outputs(&hyps, test_pairs)
}

pub(crate) fn score_outputs(hyps: &[String], test_pairs: &[TrainingPair]) -> MetricReport {
    let cfg = ChrfConfig::default();
    let refs: Vec<String> = test_pairs.iter().map(|p| p.original.nfc().collect()).collect();
    let segments = hyps.iter().zip(&refs).map(|(h, r)| chrf_sentence(h, r, &cfg)).collect();
    MetricReport {
        metric: String::from("chrF"),
        score: chrf_corpus(hyps, &refs, &cfg).unwrap_or(0.0),
        segments,
    }
}
