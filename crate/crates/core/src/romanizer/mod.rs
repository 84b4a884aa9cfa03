//! Table-driven romanization.
//!
//! Input and table sources are NFC-normalized and scanned left to right with
//! greedy longest match. Codepoints no entry covers are copied through, so
//! mixed-script text (URLs, e-mail addresses, foreign words) survives
//! untouched.

mod reverse;
mod table;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

pub use reverse::{deromanize_rule_based, is_reversible, sardinas_patterson, ReversibilityReport};
pub use table::{MappingEntry, MappingTable, Passthrough, TableOptions};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// ASCII-oriented output; tones and diacritics are dropped.
    Lossy,
    /// Diacritics kept.
    Preserving,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Lossy, Mode::Preserving];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Lossy => "lossy",
            Mode::Preserving => "preserving",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lossy" => Ok(Mode::Lossy),
            "preserving" => Ok(Mode::Preserving),
            other => Err(Error::Config(alloc::format!("unknown mode {other:?}"))),
        }
    }
}

/// Canonical decomposition, removal of combining marks, recomposition.
pub fn strip_diacritics(text: &str) -> String {
    if text.is_ascii() {
        return String::from(text);
    }
    text.nfd().filter(|&c| !is_combining_mark(c)).nfc().collect()
}

pub fn romanize(text: &str, table: &MappingTable, mode: Mode) -> Result<String> {
    Ok(romanize_aligned(text, table, mode)?
        .into_iter()
        .map(|(romanized, _)| romanized)
        .collect())
}

/// Romanizes `text` and returns the `(romanized, original)` pieces the scan
/// produced, in order.
///
/// A matched cluster yields `(target, source)`; an unmatched codepoint yields
/// an identity pair; a space inserted between two separated entries yields
/// `(" ", "")`. Concatenating either side reproduces the romanization and
/// the NFC-normalized input respectively.
pub fn romanize_aligned(text: &str, table: &MappingTable, mode: Mode) -> Result<Vec<(String, String)>> {
    let text: String = text.nfc().collect();
    let bounds: Vec<usize> = text
        .char_indices()
        .map(|(i, _)| i)
        .chain(core::iter::once(text.len()))
        .collect();
    let n = bounds.len() - 1;
    let strict = table.options().passthrough == Passthrough::ErrorOnUnmapped;

    let mut out = Vec::with_capacity(n);
    let mut unmapped = Vec::new();
    let mut prev_separated = false;
    let mut i = 0;
    while i < n {
        let longest = table.max_source_chars().min(n - i);
        let matched = (1..=longest)
            .rev()
            .find_map(|len| table.lookup(&text[bounds[i]..bounds[i + len]]).map(|e| (e, len)));
        match matched {
            Some((entry, len)) => {
                if entry.separated && prev_separated {
                    out.push((String::from(" "), String::new()));
                }
                out.push((table.target(entry, mode).into_owned(), entry.source.clone()));
                prev_separated = entry.separated;
                i += len;
            }
            None => {
                let piece = &text[bounds[i]..bounds[i + 1]];
                let c = piece.chars().next().unwrap_or_default();
                if strict && !c.is_ascii() && !unmapped.contains(&c) {
                    unmapped.push(c);
                }
                out.push((String::from(piece), String::from(piece)));
                prev_separated = false;
                i += 1;
            }
        }
    }
    if !unmapped.is_empty() {
        return Err(Error::Unmapped(unmapped));
    }
    Ok(out)
}
