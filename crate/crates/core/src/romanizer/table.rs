use alloc::borrow::Cow;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use unicode_normalization::UnicodeNormalization;

use super::{strip_diacritics, Mode};
use crate::{Error, Result};

/// What to do with input codepoints that no entry covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Passthrough {
    #[default]
    CopyUnmapped,
    ErrorOnUnmapped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingEntry {
    pub source: String,
    pub target_preserving: String,
    /// `None` means "derive from `target_preserving` by stripping diacritics".
    pub target_lossy: Option<String>,
    /// Script-specific word separator (e.g. the Ethiopic word space).
    pub is_word_space: bool,
    /// Emit a single space between this entry's output and an immediately
    /// preceding output of another separated entry. Used for scripts written
    /// without spaces whose romanization is spaced per syllable.
    pub separated: bool,
}

impl MappingEntry {
    pub fn new(source: &str, target_preserving: &str, target_lossy: Option<&str>) -> Self {
        Self {
            source: source.to_string(),
            target_preserving: target_preserving.to_string(),
            target_lossy: target_lossy.map(ToString::to_string),
            is_word_space: false,
            separated: false,
        }
    }

    pub fn word_space(source: &str) -> Self {
        Self {
            is_word_space: true,
            ..Self::new(source, " ", Some(" "))
        }
    }

    pub fn separated(mut self) -> Self {
        self.separated = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TableOptions {
    pub passthrough: Passthrough,
    /// In lossy mode, delete word-space entries instead of mapping them to a
    /// space.
    pub lossy_drops_word_space: bool,
}

/// A validated, NFC-normalized grapheme → Latin mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingTable {
    name: String,
    entries: Vec<MappingEntry>,
    options: TableOptions,
    index: BTreeMap<String, usize>,
    max_source_chars: usize,
}

impl MappingTable {
    pub fn new(name: &str, entries: Vec<MappingEntry>, options: TableOptions) -> Result<Self> {
        let mut index = BTreeMap::new();
        let mut max_source_chars = 0;
        let mut normalized = Vec::with_capacity(entries.len());
        for (i, mut entry) in entries.into_iter().enumerate() {
            entry.source = entry.source.nfc().collect();
            if entry.source.is_empty() {
                return Err(Error::Validation(alloc::format!("entry {} has an empty source", i + 1)));
            }
            if entry.is_word_space {
                entry.target_preserving = " ".to_string();
                entry.target_lossy = Some(" ".to_string());
            }
            entry.target_preserving = entry.target_preserving.nfc().collect();
            entry.target_lossy = entry.target_lossy.map(|t| t.nfc().collect());
            if index.insert(entry.source.clone(), i).is_some() {
                return Err(Error::Validation(alloc::format!("duplicate source {:?}", entry.source)));
            }
            max_source_chars = max_source_chars.max(entry.source.chars().count());
            normalized.push(entry);
        }
        Ok(Self {
            name: name.to_string(),
            entries: normalized,
            options,
            index,
            max_source_chars,
        })
    }

    /// Parses the tab-separated table format.
    ///
    /// One entry per line: `source<TAB>preserving[<TAB>lossy[<TAB>flags]]`.
    /// A missing lossy field means "derive by stripping diacritics"; a
    /// present but empty one, or the token `\0` in any target field, is the
    /// empty string. Flags are whitespace-separated: `WSPACE`, `SEP`. Lines
    /// starting with `#` are comments, except the directives
    /// `#!lossy_drops_word_space` and `#!error_on_unmapped`.
    pub fn from_tsv(name: &str, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut options = TableOptions::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            let lineno = lineno + 1;
            if let Some(directive) = line.strip_prefix("#!") {
                match directive.trim() {
                    "lossy_drops_word_space" => options.lossy_drops_word_space = true,
                    "error_on_unmapped" => options.passthrough = Passthrough::ErrorOnUnmapped,
                    other => {
                        return Err(Error::Parse {
                            line: lineno,
                            message: alloc::format!("unknown directive {other:?}"),
                        })
                    }
                }
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if !(2..=4).contains(&fields.len()) {
                return Err(Error::Parse {
                    line: lineno,
                    message: alloc::format!("expected 2 to 4 tab-separated fields, found {}", fields.len()),
                });
            }
            let source = unescape(fields[0]);
            if source.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "empty source".to_string(),
                });
            }
            let mut entry = MappingEntry::new(&source, &unescape(fields[1]), None);
            if let Some(lossy) = fields.get(2) {
                entry.target_lossy = Some(unescape(lossy));
            }
            if let Some(flags) = fields.get(3) {
                for flag in flags.split_whitespace() {
                    match flag {
                        "WSPACE" => entry.is_word_space = true,
                        "SEP" => entry.separated = true,
                        other => {
                            return Err(Error::Parse {
                                line: lineno,
                                message: alloc::format!("unknown flag {other:?}"),
                            })
                        }
                    }
                }
            }
            entries.push(entry);
        }
        Self::new(name, entries, options)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn entries(&self) -> &[MappingEntry] {
        &self.entries
    }

    pub fn options(&self) -> TableOptions {
        self.options
    }

    pub fn with_options(mut self, options: TableOptions) -> Self {
        self.options = options;
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, source: &str) -> Option<&MappingEntry> {
        self.index.get(source).map(|&i| &self.entries[i])
    }

    pub(crate) fn max_source_chars(&self) -> usize {
        self.max_source_chars
    }

    /// The string an entry produces in `mode`.
    pub fn target<'a>(&self, entry: &'a MappingEntry, mode: Mode) -> Cow<'a, str> {
        match mode {
            Mode::Preserving => Cow::Borrowed(&entry.target_preserving),
            Mode::Lossy if entry.is_word_space && self.options.lossy_drops_word_space => Cow::Borrowed(""),
            Mode::Lossy => match &entry.target_lossy {
                Some(t) => Cow::Borrowed(t),
                None => Cow::Owned(strip_diacritics(&entry.target_preserving)),
            },
        }
    }

    /// True when every lossy target is derived by diacritic stripping.
    pub fn lossy_is_derived(&self) -> bool {
        self.entries.iter().all(|e| e.target_lossy.is_none())
    }

    /// Hex SHA-256 over the table contents and `mode`; identifies the exact
    /// mapping that produced a set of training pairs.
    pub fn fingerprint(&self, mode: Mode) -> String {
        let mut hasher = Sha256::new();
        let mut field = |s: &str| {
            hasher.update((s.len() as u64).to_le_bytes());
            hasher.update(s.as_bytes());
        };
        field(mode.as_str());
        field(if self.options.lossy_drops_word_space {
            "drop"
        } else {
            "keep"
        });
        field(match self.options.passthrough {
            Passthrough::CopyUnmapped => "copy",
            Passthrough::ErrorOnUnmapped => "error",
        });
        for entry in &self.entries {
            field(&entry.source);
            field(&self.target(entry, mode));
            field(match (entry.is_word_space, entry.separated) {
                (false, false) => "",
                (true, false) => "W",
                (false, true) => "S",
                (true, true) => "WS",
            });
        }
        let digest = hasher.finalize();
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&alloc::format!("{byte:02x}"));
        }
        out
    }
}

fn unescape(field: &str) -> String {
    if field == "\\0" {
        String::new()
    } else {
        field.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_two_entry_table_with_empty_lossy_target() {
        let table = MappingTable::from_tsv("t", "Ч\tČ\tCH\nь\t'\t\n").unwrap();
        assert_eq!(table.len(), 2);
        let soft = table.lookup("ь").unwrap();
        assert_eq!(table.target(soft, Mode::Lossy), "");
        assert_eq!(table.target(soft, Mode::Preserving), "'");
        let che = table.lookup("Ч").unwrap();
        assert_eq!(table.target(che, Mode::Lossy), "CH");
    }

    #[test]
    fn empty_file_gives_empty_table() {
        let table = MappingTable::from_tsv("empty", "").unwrap();
        assert!(table.is_empty());
    }

    #[test]
    fn duplicate_source_is_rejected() {
        let err = MappingTable::from_tsv("t", "Ч\tČ\tCH\nЧ\tC\n").unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err:?}");
    }

    #[test]
    fn duplicates_are_detected_after_normalization() {
        // precomposed vs decomposed e-acute
        let err = MappingTable::from_tsv("t", "\u{e9}\te\ne\u{301}\te\n").unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = MappingTable::from_tsv("t", "# comment\na\tb\nonlyone\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "expected 2 to 4 tab-separated fields, found 1".to_string()
            }
        );
        let err = MappingTable::from_tsv("t", "a\tb\tc\tBOGUS\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn missing_lossy_field_is_derived() {
        let table = MappingTable::from_tsv("t", "她\ttā\n").unwrap();
        let e = table.lookup("她").unwrap();
        assert_eq!(e.target_lossy, None);
        assert_eq!(table.target(e, Mode::Lossy), "ta");
        assert!(table.lossy_is_derived());
    }

    #[test]
    fn escaped_empty_target_and_flags() {
        let text = "#!lossy_drops_word_space\nъ\t\\0\t\\0\n፡\t \t \tWSPACE\n她\ttā\tta\tSEP\n";
        let table = MappingTable::from_tsv("t", text).unwrap();
        assert!(table.options().lossy_drops_word_space);
        let hard = table.lookup("ъ").unwrap();
        assert_eq!(hard.target_preserving, "");
        let ws = table.lookup("፡").unwrap();
        assert!(ws.is_word_space);
        assert_eq!(table.target(ws, Mode::Preserving), " ");
        assert_eq!(table.target(ws, Mode::Lossy), "");
        assert!(table.lookup("她").unwrap().separated);
    }

    #[test]
    fn fingerprint_depends_on_mode_and_contents() {
        let a = MappingTable::from_tsv("t", "Ч\tČ\tCH\n").unwrap();
        let b = MappingTable::from_tsv("t", "Ч\tČ\tCh\n").unwrap();
        assert_ne!(a.fingerprint(Mode::Lossy), a.fingerprint(Mode::Preserving));
        assert_ne!(a.fingerprint(Mode::Lossy), b.fingerprint(Mode::Lossy));
        assert_eq!(a.fingerprint(Mode::Preserving), b.fingerprint(Mode::Preserving));
        assert_eq!(a.fingerprint(Mode::Lossy).len(), 64);
    }
}
