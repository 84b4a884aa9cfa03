use alloc::string::String;
use alloc::vec::Vec;

/// Errors produced by the toolkit.
///
/// The variants split into two families: configuration errors (bad
/// parameters supplied by the caller) and data errors (inputs that violate a
/// format or a model precondition). The CLI maps both onto exit code 2.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid mapping table: {0}")]
    Validation(String),

    #[error("unmapped characters: {}", format_codepoints(.0))]
    Unmapped(Vec<char>),

    #[error("table is not reversible in this mode{}", .witness.as_ref().map(|w| alloc::format!(" (ambiguous: {w:?})")).unwrap_or_default())]
    NotReversible { witness: Option<String> },

    #[error("sentinel {0:?} occurs in the input")]
    SentinelCollision(char),

    #[error("token {0:?} is not a single codepoint")]
    Format(String),

    #[error("sentence {index}: romanized side does not match re-romanization of the original")]
    Alignment { index: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("child vocabulary ({child}) larger than parent ({parent})")]
    Capacity { child: usize, parent: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid language code {0:?}")]
    InvalidCode(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

fn format_codepoints(chars: &[char]) -> String {
    let mut out = String::new();
    for (i, c) in chars.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&alloc::format!("U+{:04X}", *c as u32));
    }
    out
}
