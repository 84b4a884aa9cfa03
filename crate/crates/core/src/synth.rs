//! Seeded synthetic corpora for experiments and tests.
//!
//! Sentences are bags of words drawn from a Zipfian vocabulary, so the only
//! context a model can exploit is inside a word. Three generators are
//! provided:
//!
//! * [`toy_corpus`] writes in the Georgian-letter toy script of
//!   [`tables::toy`](crate::tables::toy). Part of the vocabulary comes in
//!   homograph twins that differ in one letter of a pair the lossy mode
//!   collapses (e.g. თ/ტ, both `t`), placed at adjacent frequency ranks. A
//!   fixed share of lines also carries a URL or e-mail address.
//! * [`cyrillic_corpus`] writes lowercase Cyrillic words with a capitalized
//!   first word and final punctuation.
//! * [`latin_corpus`] writes ASCII words with occasional accented vowels.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::rng::Rng;

const TOY_CONSONANTS: [&str; 25] = [
    "ბ", "გ", "დ", "ვ", "ზ", "თ", "კ", "ლ", "მ", "ნ", "პ", "რ", "ს", "ტ", "ფ", "ქ", "ღ", "ყ", "შ", "ჩ", "ც", "წ", "ხ",
    "ჯ", "ჰ",
];
const TOY_VOWELS: [&str; 5] = ["ა", "ე", "ი", "ო", "უ"];

/// Toy letters that share a lossy romanization.
const TOY_HOMOGRAPHS: [&[char]; 6] = [
    &['თ', 'ტ'],
    &['ქ', 'კ'],
    &['ფ', 'პ'],
    &['გ', 'ღ'],
    &['ს', 'შ'],
    &['ც', 'ჩ', 'წ'],
];

const MIXED_POOL: [&str; 10] = [
    "http://example.org",
    "https://tbilisi.example.com/news",
    "www.kartuli.example.net",
    "info@example.ge",
    "nino.k@mail.example",
    "http://data.example.org/v2",
    "giorgi@post.example.com",
    "email",
    "online",
    "https://maps.example.com",
];

const CYRILLIC_CONSONANTS: [&str; 21] = [
    "б", "в", "г", "д", "ж", "з", "й", "к", "л", "м", "н", "п", "р", "с", "т", "ф", "х", "ц", "ч", "ш", "щ",
];
const CYRILLIC_VOWELS: [&str; 10] = ["а", "е", "ё", "и", "о", "у", "ы", "э", "ю", "я"];
const CYRILLIC_CODAS: [&str; 2] = ["ь", "ъ"];

const LATIN_CONSONANTS: [&str; 21] = [
    "b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "q", "r", "s", "t", "v", "w", "x", "y", "z",
];
const LATIN_VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];
const LATIN_ACCENTED: [(char, char); 5] = [('a', 'à'), ('e', 'é'), ('i', 'î'), ('o', 'ö'), ('u', 'ü')];

/// Cumulative Zipf weights `1 / rank^s` for ranks `1..=n`.
fn zipf_cdf(n: usize, exponent: f64) -> Vec<f64> {
    let mut total = 0.0;
    (1..=n)
        .map(|rank| {
            total += 1.0 / libm::pow(rank as f64, exponent);
            total
        })
        .collect()
}

fn sample_cdf(rng: &mut Rng, cdf: &[f64]) -> usize {
    let u = rng.unit() * cdf[cdf.len() - 1];
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

fn pick<'a>(rng: &mut Rng, items: &[&'a str]) -> &'a str {
    items[rng.below(items.len())]
}

struct WordShape<'a> {
    consonants: &'a [&'a str],
    vowels: &'a [&'a str],
    codas: &'a [&'a str],
    max_syllables: usize,
}

impl WordShape<'_> {
    fn word(&self, rng: &mut Rng) -> String {
        let syllables = 1 + rng.below(self.max_syllables);
        let mut w = String::new();
        for i in 0..syllables {
            // an onset is skipped now and then, but only word-initially
            if i > 0 || rng.below(5) != 0 {
                w.push_str(pick(rng, self.consonants));
            }
            w.push_str(pick(rng, self.vowels));
            if rng.below(4) == 0 {
                w.push_str(pick(rng, self.consonants));
                if !self.codas.is_empty() && rng.below(3) == 0 {
                    w.push_str(pick(rng, self.codas));
                }
            }
        }
        w
    }

    fn vocabulary(&self, rng: &mut Rng, size: usize) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(size);
        while out.len() < size {
            let w = self.word(rng);
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToyCorpusConfig {
    pub sentences: usize,
    pub vocab_size: usize,
    /// Probability that a new word eligible for a twin gets one.
    pub twin_fraction: f64,
    /// Share of lines carrying Latin-script material.
    pub mixed_fraction: f64,
    pub min_words: usize,
    pub max_words: usize,
    pub zipf_exponent: f64,
    pub seed: u64,
}

impl Default for ToyCorpusConfig {
    fn default() -> Self {
        Self {
            sentences: 10_000,
            vocab_size: 400,
            twin_fraction: 0.5,
            mixed_fraction: 0.05,
            min_words: 3,
            max_words: 9,
            zipf_exponent: 1.0,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthCorpus {
    pub sentences: Vec<String>,
    /// `mixed[i]` is true when line `i` carries Latin-script material.
    pub mixed: Vec<bool>,
    pub vocabulary: Vec<String>,
}

fn toy_twin(word: &str, rng: &mut Rng) -> Option<String> {
    let chars: Vec<char> = word.chars().collect();
    let positions: Vec<usize> = (0..chars.len())
        .filter(|&i| TOY_HOMOGRAPHS.iter().any(|g| g.contains(&chars[i])))
        .collect();
    if positions.is_empty() {
        return None;
    }
    let at = positions[rng.below(positions.len())];
    let group = TOY_HOMOGRAPHS.iter().find(|g| g.contains(&chars[at]))?;
    let others: Vec<char> = group.iter().copied().filter(|&c| c != chars[at]).collect();
    let mut twin = chars.clone();
    twin[at] = others[rng.below(others.len())];
    Some(twin.into_iter().collect())
}

/// Sentences in the toy script with lossy homograph twins and a share of
/// mixed-script lines.
pub fn toy_corpus(cfg: &ToyCorpusConfig) -> SynthCorpus {
    let mut rng = Rng::new(cfg.seed);
    let shape = WordShape {
        consonants: &TOY_CONSONANTS,
        vowels: &TOY_VOWELS,
        codas: &[],
        max_syllables: 3,
    };
    let mut seen = BTreeSet::new();
    let mut vocabulary: Vec<String> = Vec::with_capacity(cfg.vocab_size);
    while vocabulary.len() < cfg.vocab_size {
        let w = shape.word(&mut rng);
        if !seen.insert(w.clone()) {
            continue;
        }
        vocabulary.push(w.clone());
        if vocabulary.len() < cfg.vocab_size && rng.unit() < cfg.twin_fraction {
            if let Some(twin) = toy_twin(&w, &mut rng) {
                if seen.insert(twin.clone()) {
                    vocabulary.push(twin);
                }
            }
        }
    }
    let mut sentences = bag_of_words(
        &mut rng,
        &vocabulary,
        cfg.sentences,
        cfg.min_words,
        cfg.max_words,
        cfg.zipf_exponent,
    );

    let mixed_count = libm::round(cfg.mixed_fraction * cfg.sentences as f64) as usize;
    let mut order: Vec<usize> = (0..cfg.sentences).collect();
    rng.shuffle(&mut order);
    let mut mixed = alloc::vec![false; cfg.sentences];
    for &i in &order[..mixed_count.min(cfg.sentences)] {
        mixed[i] = true;
        let words: Vec<&str> = sentences[i].split(' ').collect();
        let at = rng.below(words.len() + 1);
        let item = pick(&mut rng, &MIXED_POOL);
        let mut line: Vec<&str> = Vec::with_capacity(words.len() + 1);
        line.extend_from_slice(&words[..at]);
        line.push(item);
        line.extend_from_slice(&words[at..]);
        sentences[i] = line.join(" ");
    }
    SynthCorpus {
        sentences,
        mixed,
        vocabulary,
    }
}

fn bag_of_words(
    rng: &mut Rng,
    vocabulary: &[String],
    sentences: usize,
    min_words: usize,
    max_words: usize,
    exponent: f64,
) -> Vec<String> {
    let cdf = zipf_cdf(vocabulary.len(), exponent);
    let span = max_words.saturating_sub(min_words) + 1;
    (0..sentences)
        .map(|_| {
            let n = min_words.max(1) + rng.below(span);
            let words: Vec<&str> = (0..n).map(|_| vocabulary[sample_cdf(rng, &cdf)].as_str()).collect();
            words.join(" ")
        })
        .collect()
}

/// Lowercase Cyrillic word sequences; the first word is capitalized and each
/// line ends in `.`, `?` or `!`.
pub fn cyrillic_corpus(sentences: usize, vocab_size: usize, seed: u64) -> SynthCorpus {
    let mut rng = Rng::new(seed);
    let shape = WordShape {
        consonants: &CYRILLIC_CONSONANTS,
        vowels: &CYRILLIC_VOWELS,
        codas: &CYRILLIC_CODAS,
        max_syllables: 3,
    };
    let vocabulary = shape.vocabulary(&mut rng, vocab_size);
    let lines = bag_of_words(&mut rng, &vocabulary, sentences, 2, 8, 1.0);
    let sentences = lines
        .into_iter()
        .map(|line| {
            let mut chars = line.chars();
            let mut out: String = chars.next().map(|c| c.to_uppercase().collect()).unwrap_or_default();
            out.push_str(chars.as_str());
            out.push(['.', '?', '!'][rng.below(3)]);
            out
        })
        .collect::<Vec<_>>();
    SynthCorpus {
        mixed: alloc::vec![false; sentences.len()],
        sentences,
        vocabulary,
    }
}

/// ASCII word sequences in which a share of vocabulary words carry one
/// accented vowel.
pub fn latin_corpus(sentences: usize, vocab_size: usize, accent_rate: f64, seed: u64) -> SynthCorpus {
    let mut rng = Rng::new(seed);
    let shape = WordShape {
        consonants: &LATIN_CONSONANTS,
        vowels: &LATIN_VOWELS,
        codas: &[],
        max_syllables: 4,
    };
    let mut vocabulary = shape.vocabulary(&mut rng, vocab_size);
    for w in vocabulary.iter_mut() {
        if rng.unit() < accent_rate {
            let vowels: Vec<usize> = w
                .char_indices()
                .filter(|(_, c)| LATIN_ACCENTED.iter().any(|(plain, _)| plain == c))
                .map(|(i, _)| i)
                .collect();
            let at = vowels[rng.below(vowels.len())];
            let plain = w[at..].chars().next().unwrap_or('a');
            let accented = LATIN_ACCENTED
                .iter()
                .find(|(p, _)| *p == plain)
                .map_or(plain, |(_, a)| *a);
            w.replace_range(at..at + plain.len_utf8(), accented.encode_utf8(&mut [0; 4]));
        }
    }
    let sentences = bag_of_words(&mut rng, &vocabulary, sentences, 3, 12, 1.0);
    SynthCorpus {
        mixed: alloc::vec![false; sentences.len()],
        sentences,
        vocabulary,
    }
}
