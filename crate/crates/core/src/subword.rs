//! Byte-pair-encoding subword vocabularies with character coverage.
//!
//! Words are whitespace tokens prefixed with the boundary marker `▁`.
//! Characters outside the coverage set map to a single `<unk>` piece, which
//! never takes part in merges. Piece ids: 0 is `<unk>`, 1 is `▁`, then the
//! covered characters by descending frequency, then merge outputs in the
//! order the merges were learned.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const UNK: &str = "<unk>";
pub const BOUNDARY: char = '\u{2581}';
pub const UNK_ID: u32 = 0;
pub const BOUNDARY_ID: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "VocabFile", into = "VocabFile")]
pub struct SubwordVocab {
    pieces: Vec<String>,
    merges: Vec<(String, String)>,
    covered_chars: Vec<char>,
    coverage: f64,
    requested_size: usize,
    ids: BTreeMap<String, u32>,
    ranks: BTreeMap<(u32, u32), (usize, u32)>,
}

#[derive(Serialize, Deserialize)]
struct VocabFile {
    pieces: Vec<String>,
    merges: Vec<(String, String)>,
    covered_chars: Vec<char>,
    coverage: f64,
    #[serde(default)]
    requested_size: usize,
}

impl From<VocabFile> for SubwordVocab {
    fn from(file: VocabFile) -> Self {
        let mut vocab = SubwordVocab {
            requested_size: if file.requested_size == 0 {
                file.pieces.len()
            } else {
                file.requested_size
            },
            pieces: file.pieces,
            merges: file.merges,
            covered_chars: file.covered_chars,
            coverage: file.coverage,
            ids: BTreeMap::new(),
            ranks: BTreeMap::new(),
        };
        vocab.index();
        vocab
    }
}

impl From<SubwordVocab> for VocabFile {
    fn from(v: SubwordVocab) -> Self {
        VocabFile {
            pieces: v.pieces,
            merges: v.merges,
            covered_chars: v.covered_chars,
            coverage: v.coverage,
            requested_size: v.requested_size,
        }
    }
}

impl SubwordVocab {
    fn index(&mut self) {
        self.ids = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        self.ranks.clear();
        for (rank, (left, right)) in self.merges.iter().enumerate() {
            let (Some(&l), Some(&r)) = (self.ids.get(left), self.ids.get(right)) else {
                continue;
            };
            let mut joined = left.clone();
            joined.push_str(right);
            if let Some(&out) = self.ids.get(&joined) {
                self.ranks.entry((l, r)).or_insert((rank, out));
            }
        }
    }

    pub fn pieces(&self) -> &[String] {
        &self.pieces
    }

    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    pub fn covered_chars(&self) -> &[char] {
        &self.covered_chars
    }

    pub fn coverage(&self) -> f64 {
        self.coverage
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn requested_size(&self) -> usize {
        self.requested_size
    }

    /// True when the corpus ran out of repeated pairs before the requested
    /// size was reached.
    pub fn is_truncated(&self) -> bool {
        self.pieces.len() < self.requested_size
    }

    pub fn id(&self, piece: &str) -> Option<u32> {
        self.ids.get(piece).copied()
    }

    pub fn piece(&self, id: u32) -> Option<&str> {
        self.pieces.get(id as usize).map(String::as_str)
    }

    fn char_id(&self, c: char) -> u32 {
        let mut buf = [0u8; 4];
        self.ids
            .get(&*c.encode_utf8(&mut buf))
            .copied()
            .filter(|&id| id > BOUNDARY_ID)
            .unwrap_or(UNK_ID)
    }
}

fn sorted_char_counts<S: AsRef<str>>(corpus: &[S]) -> Vec<(char, u64)> {
    let mut counts: BTreeMap<char, u64> = BTreeMap::new();
    for line in corpus {
        for c in line.as_ref().chars().filter(|c| !c.is_whitespace()) {
            *counts.entry(c).or_default() += 1;
        }
    }
    let mut counts: Vec<(char, u64)> = counts.into_iter().collect();
    counts.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    counts
}

/// Learns a BPE vocabulary of at most `size` pieces.
///
/// Characters are kept, most frequent first, until they account for at least
/// `coverage` of all non-space character occurrences. Each merge joins the
/// most frequent adjacent pair; ties go to the lexicographically smallest
/// concatenation, then to the smallest left piece. Training stops at `size`
/// pieces or when no pair occurs more than once.
pub fn train_bpe<S: AsRef<str>>(corpus: &[S], size: usize, coverage: f64) -> Result<SubwordVocab> {
    if !(coverage > 0.0 && coverage <= 1.0) {
        return Err(Error::Config(alloc::format!("coverage {coverage} outside (0, 1]")));
    }
    let counts = sorted_char_counts(corpus);
    let total: u64 = counts.iter().map(|(_, n)| n).sum();
    let mut covered = Vec::new();
    let mut cumulative = 0u64;
    for &(c, n) in &counts {
        if total > 0 && cumulative as f64 >= coverage * total as f64 {
            break;
        }
        covered.push(c);
        cumulative += n;
    }
    if size < covered.len() + 2 {
        return Err(Error::Config(alloc::format!(
            "vocabulary size {size} is below {} covered characters plus 2 reserved pieces",
            covered.len()
        )));
    }

    let mut pieces: Vec<String> = alloc::vec![UNK.to_string(), BOUNDARY.to_string()];
    pieces.extend(covered.iter().map(|c| c.to_string()));
    let mut ids: BTreeMap<String, u32> = pieces.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();

    let mut word_freq: BTreeMap<&str, u64> = BTreeMap::new();
    for line in corpus {
        for word in line.as_ref().split_whitespace() {
            *word_freq.entry(word).or_default() += 1;
        }
    }
    let mut words: Vec<(Vec<u32>, u64)> = word_freq
        .into_iter()
        .map(|(word, freq)| {
            let symbols = core::iter::once(BOUNDARY_ID)
                .chain(word.chars().map(|c| {
                    let mut buf = [0u8; 4];
                    ids.get(&*c.encode_utf8(&mut buf)).copied().unwrap_or(UNK_ID)
                }))
                .collect();
            (symbols, freq)
        })
        .collect();

    let mut merges = Vec::new();
    while pieces.len() < size {
        let mut pair_counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        for (symbols, freq) in &words {
            for pair in symbols.windows(2) {
                if pair[0] != UNK_ID && pair[1] != UNK_ID {
                    *pair_counts.entry((pair[0], pair[1])).or_default() += freq;
                }
            }
        }
        let best = pair_counts.iter().max_by(|(a, ca), (b, cb)| {
            ca.cmp(cb).then_with(|| {
                let ja = [pieces[a.0 as usize].as_str(), pieces[a.1 as usize].as_str()].concat();
                let jb = [pieces[b.0 as usize].as_str(), pieces[b.1 as usize].as_str()].concat();
                jb.cmp(&ja)
                    .then_with(|| pieces[b.0 as usize].cmp(&pieces[a.0 as usize]))
            })
        });
        let Some((&(left, right), &count)) = best else { break };
        if count < 2 {
            break;
        }
        let joined = [pieces[left as usize].as_str(), pieces[right as usize].as_str()].concat();
        let merged = match ids.get(&joined) {
            Some(&id) => id,
            None => {
                let id = pieces.len() as u32;
                ids.insert(joined.clone(), id);
                pieces.push(joined);
                id
            }
        };
        merges.push((pieces[left as usize].clone(), pieces[right as usize].clone()));
        for (symbols, _) in &mut words {
            apply_merge(symbols, left, right, merged);
        }
    }

    let mut vocab = SubwordVocab {
        pieces,
        merges,
        covered_chars: {
            let mut c = covered;
            c.sort_unstable();
            c
        },
        coverage,
        requested_size: size,
        ids: BTreeMap::new(),
        ranks: BTreeMap::new(),
    };
    vocab.index();
    Ok(vocab)
}

fn apply_merge(symbols: &mut Vec<u32>, left: u32, right: u32, merged: u32) {
    let mut out = Vec::with_capacity(symbols.len());
    let mut i = 0;
    while i < symbols.len() {
        if i + 1 < symbols.len() && symbols[i] == left && symbols[i + 1] == right {
            out.push(merged);
            i += 2;
        } else {
            out.push(symbols[i]);
            i += 1;
        }
    }
    *symbols = out;
}

/// Segments text into piece ids by replaying merges in training order.
pub fn segment(text: &str, vocab: &SubwordVocab) -> Vec<u32> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        let mut symbols: Vec<u32> = core::iter::once(BOUNDARY_ID)
            .chain(word.chars().map(|c| vocab.char_id(c)))
            .collect();
        loop {
            let best = symbols
                .windows(2)
                .filter_map(|pair| {
                    vocab
                        .ranks
                        .get(&(pair[0], pair[1]))
                        .map(|&(rank, out)| (rank, pair[0], pair[1], out))
                })
                .min();
            match best {
                Some((_, left, right, merged)) => apply_merge(&mut symbols, left, right, merged),
                None => break,
            }
        }
        out.extend(symbols);
    }
    out
}

pub fn segment_pieces<'v>(text: &str, vocab: &'v SubwordVocab) -> Vec<&'v str> {
    segment(text, vocab)
        .into_iter()
        .map(|id| vocab.piece(id).unwrap_or(UNK))
        .collect()
}

/// Joins pieces back into text. `<unk>` pieces are rendered as U+FFFD.
pub fn detokenize(ids: &[u32], vocab: &SubwordVocab) -> String {
    let mut out = String::new();
    for &id in ids {
        if id == UNK_ID {
            out.push('\u{FFFD}');
        } else if let Some(piece) = vocab.piece(id) {
            for c in piece.chars() {
                out.push(if c == BOUNDARY { ' ' } else { c });
            }
        }
    }
    match out.strip_prefix(' ') {
        Some(rest) => rest.to_string(),
        None => out,
    }
}

pub fn avg_subwords_per_sentence<S: AsRef<str>>(corpus: &[S], vocab: &SubwordVocab) -> Result<f64> {
    if corpus.is_empty() {
        return Err(Error::InsufficientData(String::from("empty corpus")));
    }
    let total: usize = corpus.iter().map(|s| segment(s.as_ref(), vocab).len()).sum();
    Ok(total as f64 / corpus.len() as f64)
}
