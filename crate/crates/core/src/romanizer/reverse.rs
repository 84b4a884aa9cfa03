use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::{MappingTable, Mode};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReversibilityReport {
    /// No two entries share a target in this mode.
    pub injective: bool,
    /// The set of distinct non-empty targets is a uniquely decodable code.
    pub uniquely_decodable: bool,
    /// Some entry maps to the empty string in this mode.
    pub has_empty_target: bool,
    /// Some entries insert separator spaces, which collide with literal
    /// spaces in the input.
    pub inserts_separators: bool,
    /// A romanized string with more than one preimage, when one was found.
    pub witness: Option<String>,
}

impl ReversibilityReport {
    pub fn reversible(&self) -> bool {
        self.injective && self.uniquely_decodable && !self.has_empty_target && !self.inserts_separators
    }
}

pub fn is_reversible(table: &MappingTable, mode: Mode) -> ReversibilityReport {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut injective = true;
    let mut has_empty_target = false;
    let mut collision = None;
    for entry in table.entries() {
        let target = table.target(entry, mode).into_owned();
        if target.is_empty() {
            has_empty_target = true;
            continue;
        }
        let count = seen.entry(target.clone()).or_default();
        *count += 1;
        if *count == 2 && injective {
            injective = false;
            collision = Some(target);
        }
    }
    let codes: Vec<String> = seen.into_keys().collect();
    let dangling = sardinas_patterson(&codes);
    ReversibilityReport {
        injective,
        uniquely_decodable: dangling.is_none(),
        has_empty_target,
        inserts_separators: table.entries().iter().any(|e| e.separated),
        witness: collision.or(dangling),
    }
}

/// Decides unique decodability of a set of codewords.
///
/// Returns `None` when every concatenation of codewords has exactly one
/// factorization, otherwise a concatenation with two factorizations. Empty
/// codewords are ignored and duplicates count once.
///
/// The search runs breadth-first over dangling suffixes. Each state keeps two
/// partial factorizations `ahead` and `behind` with
/// `concat(ahead) == concat(behind) + suffix`; reaching a suffix that is itself
/// a codeword closes both parses on the same string.
pub fn sardinas_patterson(codewords: &[String]) -> Option<String> {
    let codes: Vec<&str> = codewords
        .iter()
        .map(String::as_str)
        .filter(|c| !c.is_empty())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let is_code: BTreeSet<&str> = codes.iter().copied().collect();

    struct State<'a> {
        suffix: String,
        ahead: Vec<&'a str>,
        behind: Vec<&'a str>,
    }

    let mut visited: BTreeSet<String> = BTreeSet::new();
    let mut queue: VecDeque<State> = VecDeque::new();
    for &short in &codes {
        for &long in &codes {
            if long != short {
                if let Some(rest) = long.strip_prefix(short) {
                    if visited.insert(String::from(rest)) {
                        queue.push_back(State {
                            suffix: String::from(rest),
                            ahead: alloc::vec![long],
                            behind: alloc::vec![short],
                        });
                    }
                }
            }
        }
    }

    while let Some(state) = queue.pop_front() {
        if is_code.contains(state.suffix.as_str()) {
            return Some(state.ahead.concat());
        }
        for &code in &codes {
            if let Some(rest) = code.strip_prefix(state.suffix.as_str()) {
                // the codeword overshoots: the lagging parse takes the lead
                if !rest.is_empty() && visited.insert(String::from(rest)) {
                    let mut ahead = state.behind.clone();
                    ahead.push(code);
                    queue.push_back(State {
                        suffix: String::from(rest),
                        ahead,
                        behind: state.ahead.clone(),
                    });
                }
            } else if let Some(rest) = state.suffix.strip_prefix(code) {
                if visited.insert(String::from(rest)) {
                    let mut behind = state.behind.clone();
                    behind.push(code);
                    queue.push_back(State {
                        suffix: String::from(rest),
                        ahead: state.ahead.clone(),
                        behind,
                    });
                }
            }
        }
    }
    None
}

/// Maps romanized text back through the inverted table.
///
/// Among all ways to cover the input with inverted targets and verbatim
/// single-codepoint copies, the one with the fewest copies is chosen; ties go
/// to the longest target at each step from the left. When targets collide, the
/// first entry in table order wins. For a reversible table and fully mapped
/// input this recovers the original exactly.
///
/// Latin text that was never romanized is still read as codewords where it
/// can be, so passthrough material gets transliterated: this mirrors how
/// built-in rule-based reversal breaks on mixed-script input.
pub fn deromanize_rule_based(text: &str, table: &MappingTable, mode: Mode, best_effort: bool) -> Result<String> {
    if !best_effort {
        let report = is_reversible(table, mode);
        if !report.reversible() {
            return Err(Error::NotReversible {
                witness: report.witness,
            });
        }
    }

    let mut inverse: BTreeMap<String, &str> = BTreeMap::new();
    let mut max_chars = 0;
    for entry in table.entries() {
        let target = table.target(entry, mode).into_owned();
        if target.is_empty() {
            continue;
        }
        max_chars = max_chars.max(target.chars().count());
        inverse.entry(target).or_insert(entry.source.as_str());
    }

    let text: String = text.nfc().collect();
    let bounds: Vec<usize> = text
        .char_indices()
        .map(|(i, _)| i)
        .chain(core::iter::once(text.len()))
        .collect();
    let n = bounds.len() - 1;

    // copies[i]: fewest verbatim copies needed to cover text[i..]
    let mut copies = alloc::vec![0usize; n + 1];
    for i in (0..n).rev() {
        let mut best = copies[i + 1] + 1;
        for len in 1..=max_chars.min(n - i) {
            if inverse.contains_key(&text[bounds[i]..bounds[i + len]]) {
                best = best.min(copies[i + len]);
            }
        }
        copies[i] = best;
    }

    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < n {
        let step = (1..=max_chars.min(n - i)).rev().find_map(|len| {
            inverse
                .get(&text[bounds[i]..bounds[i + len]])
                .filter(|_| copies[i + len] == copies[i])
                .map(|source| (*source, len))
        });
        match step {
            Some((source, len)) => {
                out.push_str(source);
                i += len;
            }
            None => {
                out.push_str(&text[bounds[i]..bounds[i + 1]]);
                i += 1;
            }
        }
    }
    Ok(out)
}
