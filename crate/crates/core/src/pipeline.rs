//! Corpus preparation for multilingual finetuning: target-language tags,
//! parent/child mixtures, the deromanization data-size ablation and corpus
//! statistics before and after romanization.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::deromanizer::{evaluate_deromanization, make_training_pairs, train_deromanizer, DeromanizerConfig};
use crate::metrics::{token_count, type_count};
use crate::rng::Rng;
use crate::romanizer::{romanize, MappingTable, Mode};
use crate::subword::{avg_subwords_per_sentence, SubwordVocab};
use crate::{Error, Result};

/// Version stamped into JSON reports.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelCorpus {
    pub source: Vec<String>,
    pub target: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub src_lang: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tgt_lang: Option<String>,
}

impl ParallelCorpus {
    pub fn new(source: Vec<String>, target: Vec<String>) -> Result<Self> {
        if source.len() != target.len() {
            return Err(Error::LengthMismatch(source.len(), target.len()));
        }
        Ok(Self {
            source,
            target,
            src_lang: None,
            tgt_lang: None,
        })
    }

    pub fn with_langs(mut self, src: &str, tgt: &str) -> Self {
        self.src_lang = Some(String::from(src));
        self.tgt_lang = Some(String::from(tgt));
        self
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.source
            .iter()
            .map(String::as_str)
            .zip(self.target.iter().map(String::as_str))
    }
}

/// The tag token for a target language, e.g. `<2de>`.
pub fn language_tag(code: &str) -> Result<String> {
    if code.is_empty() || code.chars().any(|c| c.is_whitespace() || c == '<' || c == '>') {
        return Err(Error::InvalidCode(String::from(code)));
    }
    Ok(alloc::format!("<2{code}>"))
}

pub fn tag_line(tag: &str, line: &str) -> String {
    let mut out = String::with_capacity(tag.len() + 1 + line.len());
    out.push_str(tag);
    out.push(' ');
    out.push_str(line);
    out
}

/// Prefixes every source line with the target-language tag. Tagging is not
/// idempotent: a second call adds a second tag.
pub fn tag_targets(corpus: &ParallelCorpus, target_lang: &str) -> Result<ParallelCorpus> {
    let tag = language_tag(target_lang)?;
    Ok(ParallelCorpus {
        source: corpus.source.iter().map(|s| tag_line(&tag, s)).collect(),
        target: corpus.target.clone(),
        src_lang: corpus.src_lang.clone(),
        tgt_lang: Some(String::from(target_lang)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub parent_take: usize,
    pub total_target: usize,
    pub shuffle_seed: u64,
}

impl Default for MixtureSpec {
    fn default() -> Self {
        Self {
            parent_take: 250_000,
            total_target: 650_000,
            shuffle_seed: 0,
        }
    }
}

impl MixtureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.parent_take >= self.total_target {
            return Err(Error::Config(alloc::format!(
                "parent_take ({}) must be smaller than total_target ({})",
                self.parent_take,
                self.total_target
            )));
        }
        Ok(())
    }

    pub fn child_slots(&self) -> usize {
        self.total_target - self.parent_take
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    Parent(usize),
    Child(usize),
}

/// Builds a finetuning mixture.
///
/// The parent is shuffled with `shuffle_seed` and its first `parent_take`
/// pairs are kept. The child is repeated whole until it fills the remaining
/// `total_target - parent_take` slots (the last copy is truncated). The
/// concatenation is then shuffled again with a generator derived from the
/// same seed.
pub fn mix_corpora(parent: &ParallelCorpus, child: &ParallelCorpus, spec: &MixtureSpec) -> Result<ParallelCorpus> {
    spec.validate()?;
    if child.is_empty() {
        return Err(Error::InsufficientData(String::from("child corpus is empty")));
    }
    if parent.len() < spec.parent_take {
        return Err(Error::InsufficientData(alloc::format!(
            "parent has {} pairs, {} requested",
            parent.len(),
            spec.parent_take
        )));
    }
    let mut rng = Rng::new(spec.shuffle_seed);
    let mut parent_order: Vec<usize> = (0..parent.len()).collect();
    rng.shuffle(&mut parent_order);

    let mut mixture: Vec<Origin> = Vec::with_capacity(spec.total_target);
    mixture.extend(parent_order[..spec.parent_take].iter().map(|&i| Origin::Parent(i)));
    mixture.extend((0..spec.child_slots()).map(|k| Origin::Child(k % child.len())));
    rng.shuffle(&mut mixture);

    let mut source = Vec::with_capacity(mixture.len());
    let mut target = Vec::with_capacity(mixture.len());
    for origin in mixture {
        let (corpus, i) = match origin {
            Origin::Parent(i) => (parent, i),
            Origin::Child(i) => (child, i),
        };
        source.push(corpus.source[i].clone());
        target.push(corpus.target[i].clone());
    }
    let same = |a: &Option<String>, b: &Option<String>| if a == b { a.clone() } else { None };
    Ok(ParallelCorpus {
        source,
        target,
        src_lang: same(&parent.src_lang, &child.src_lang),
        tgt_lang: same(&parent.tgt_lang, &child.tgt_lang),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub fraction: f64,
    pub seed: u64,
    pub train_sentences: usize,
    pub chrf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub schema_version: u32,
    pub mode: Mode,
    pub test_sentences: usize,
    pub rows: Vec<AblationRow>,
}

impl AblationReport {
    /// Mean chrF per fraction, in the order the fractions were given.
    pub fn means(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64, usize)> = Vec::new();
        for row in &self.rows {
            match out.iter_mut().find(|(f, _, _)| *f == row.fraction) {
                Some(entry) => {
                    entry.1 += row.chrf;
                    entry.2 += 1;
                }
                None => out.push((row.fraction, row.chrf, 1)),
            }
        }
        out.into_iter().map(|(f, sum, n)| (f, sum / n as f64)).collect()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("fraction\tseed\ttrain_sentences\tchrf\n");
        for row in &self.rows {
            out.push_str(&alloc::format!(
                "{}\t{}\t{}\t{:.4}\n",
                row.fraction,
                row.seed,
                row.train_sentences,
                row.chrf
            ));
        }
        out
    }
}

/// Trains a deromanizer on nested subsets of `corpus` and scores each model
/// on a fixed held-out set.
///
/// The final 10% of the corpus (at least one sentence) is held out. For each
/// seed the remaining pool is shuffled once and every fraction takes the
/// first `⌊fraction · pool⌋` sentences, so smaller subsets are prefixes of
/// larger ones.
pub fn derom_ablation<S: AsRef<str>>(
    corpus: &[S],
    table: &MappingTable,
    mode: Mode,
    fractions: &[f64],
    seeds: &[u64],
    config: DeromanizerConfig,
) -> Result<AblationReport> {
    let mut report = AblationReport {
        schema_version: SCHEMA_VERSION,
        mode,
        test_sentences: 0,
        rows: Vec::new(),
    };
    if fractions.is_empty() || seeds.is_empty() {
        return Ok(report);
    }
    for &f in fractions {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::Config(alloc::format!("fraction {f} outside (0, 1]")));
        }
    }
    config.validate()?;
    if corpus.len() < 2 {
        return Err(Error::InsufficientData(String::from(
            "ablation needs at least two sentences",
        )));
    }
    let pairs = make_training_pairs(corpus, table, mode)?;
    let test_len = (corpus.len() / 10).max(1);
    let (pool, test) = pairs.split_at(corpus.len() - test_len);
    report.test_sentences = test.len();
    let sizes: Vec<usize> = fractions
        .iter()
        .map(|&f| {
            let k = libm::floor(f * pool.len() as f64) as usize;
            if k == 0 {
                Err(Error::InsufficientData(alloc::format!(
                    "fraction {f} selects no sentences"
                )))
            } else {
                Ok(k)
            }
        })
        .collect::<Result<_>>()?;

    for &seed in seeds {
        let mut order: Vec<usize> = (0..pool.len()).collect();
        Rng::new(seed).shuffle(&mut order);
        for (&fraction, &k) in fractions.iter().zip(&sizes) {
            let subset: Vec<_> = order[..k].iter().map(|&i| pool[i].clone()).collect();
            let model = train_deromanizer(&subset, config, Some((table, mode)))?;
            let chrf = evaluate_deromanization(&model, test).score;
            report.rows.push(AblationRow {
                fraction,
                seed,
                train_sentences: k,
                chrf,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideStats {
    pub tokens: usize,
    pub types: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_subwords_per_sentence: Option<f64>,
}

/// Percent change relative to the original side; `None` when the original
/// value is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeChange {
    pub tokens: Option<f64>,
    pub types: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_subwords_per_sentence: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RomanizedStats {
    pub mode: Mode,
    #[serde(flatten)]
    pub stats: SideStats,
    pub relative_change: RelativeChange,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub schema_version: u32,
    pub sentences: usize,
    #[serde(flatten)]
    pub original: SideStats,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub romanized: Vec<RomanizedStats>,
}

pub fn side_stats<S: AsRef<str>>(corpus: &[S], vocab: Option<&SubwordVocab>) -> SideStats {
    SideStats {
        tokens: token_count(corpus),
        types: type_count(corpus),
        avg_subwords_per_sentence: vocab.and_then(|v| avg_subwords_per_sentence(corpus, v).ok()),
    }
}

pub fn relative_change_pct(original: f64, changed: f64) -> Option<f64> {
    if original == 0.0 {
        None
    } else {
        Some(100.0 * (changed - original) / original)
    }
}

pub fn compare_stats(original: &SideStats, changed: &SideStats) -> RelativeChange {
    RelativeChange {
        tokens: relative_change_pct(original.tokens as f64, changed.tokens as f64),
        types: relative_change_pct(original.types as f64, changed.types as f64),
        avg_subwords_per_sentence: match (original.avg_subwords_per_sentence, changed.avg_subwords_per_sentence) {
            (Some(a), Some(b)) => relative_change_pct(a, b),
            _ => None,
        },
    }
}

/// Counts for `corpus` and, when a table is given, for its romanization in
/// each mode. Subword lengths are measured with `vocab` on both sides.
pub fn corpus_stats<S: AsRef<str>>(
    corpus: &[S],
    vocab: Option<&SubwordVocab>,
    table: Option<&MappingTable>,
) -> Result<CorpusStats> {
    let original = side_stats(corpus, vocab);
    let mut romanized = Vec::new();
    if let Some(table) = table {
        for mode in Mode::ALL {
            let lines = corpus
                .iter()
                .map(|line| romanize(line.as_ref(), table, mode))
                .collect::<Result<Vec<_>>>()?;
            let stats = side_stats(&lines, vocab);
            romanized.push(RomanizedStats {
                mode,
                relative_change: compare_stats(&original, &stats),
                stats,
            });
        }
    }
    Ok(CorpusStats {
        schema_version: SCHEMA_VERSION,
        sentences: corpus.len(),
        original,
        romanized,
    })
}
