use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Space-separated character format for character-level sequence models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharEncodingConfig {
    /// Stands in for an original space. Must not occur in the data.
    pub space_sentinel: char,
}

impl Default for CharEncodingConfig {
    fn default() -> Self {
        Self {
            space_sentinel: '\u{2300}',
        }
    }
}

impl CharEncodingConfig {
    pub fn new(space_sentinel: char) -> Result<Self> {
        if space_sentinel == ' ' {
            return Err(Error::Config(String::from(
                "sentinel must differ from the space character",
            )));
        }
        Ok(Self { space_sentinel })
    }
}

/// `Čto tam` becomes `Č t o ⌀ t a m`.
pub fn encode_chars(text: &str, cfg: &CharEncodingConfig) -> Result<String> {
    if text.contains(cfg.space_sentinel) {
        return Err(Error::SentinelCollision(cfg.space_sentinel));
    }
    let mut out = String::with_capacity(text.len() * 2);
    for (i, c) in text.chars().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push(if c == ' ' { cfg.space_sentinel } else { c });
    }
    Ok(out)
}

/// Inverse of [`encode_chars`]. Runs of separator spaces are tolerated.
pub fn decode_chars(encoded: &str, cfg: &CharEncodingConfig) -> Result<String> {
    let mut out = String::with_capacity(encoded.len() / 2 + 1);
    for token in encoded.split(' ').filter(|t| !t.is_empty()) {
        let mut chars = token.chars();
        let c = chars.next().unwrap_or_default();
        if chars.next().is_some() {
            return Err(Error::Format(String::from(token)));
        }
        out.push(if c == cfg.space_sentinel { ' ' } else { c });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodes_worked_example_lines() {
        let cfg = CharEncodingConfig::default();
        assert_eq!(
            encode_chars("Čto tam dal'še?", &cfg).unwrap(),
            "Č t o ⌀ t a m ⌀ d a l ' š e ?"
        );
        assert_eq!(
            encode_chars("Что там дальше?", &cfg).unwrap(),
            "Ч т о ⌀ т а м ⌀ д а л ь ш е ?"
        );
        assert_eq!(encode_chars("a", &cfg).unwrap(), "a");
    }

    #[test]
    fn decodes() {
        let cfg = CharEncodingConfig::default();
        assert_eq!(decode_chars("Č t o ⌀ t a m", &cfg).unwrap(), "Čto tam");
        assert_eq!(decode_chars("", &cfg).unwrap(), "");
        assert_eq!(decode_chars("⌀", &cfg).unwrap(), " ");
        assert_eq!(decode_chars("Ч т о ⌀  т а м", &cfg).unwrap(), "Что там");
    }

    #[test]
    fn rejects_sentinel_in_input_and_multi_codepoint_tokens() {
        let cfg = CharEncodingConfig::default();
        assert_eq!(encode_chars("a⌀b", &cfg), Err(Error::SentinelCollision('⌀')));
        assert_eq!(decode_chars("a bc", &cfg), Err(Error::Format(String::from("bc"))));
    }

    #[test]
    fn sentinel_must_not_be_space() {
        assert!(CharEncodingConfig::new(' ').is_err());
        assert!(CharEncodingConfig::new('_').is_ok());
    }
}
