//! Transliteration and vocabulary-transfer toolkit.
//!
//! The crate is `no_std` with `alloc`. Everything here is a pure function over
//! in-memory data: table-driven romanization in a lossy and a
//! diacritic-preserving mode, rule-based and learned deromanization, BPE
//! subword vocabularies, parent/child vocabulary transfer, chrF/BLEU scoring
//! with paired bootstrap resampling, and the corpus-preparation steps used for
//! multilingual finetuning. File IO and the command-line front end live in the
//! companion `translit` crate.
//!
//! ```
//! use translit_core::romanizer::{romanize, Mode};
//! use translit_core::tables;
//!
//! let table = tables::mandarin();
//! assert_eq!(romanize("她到塔皓湖去了", &table, Mode::Lossy).unwrap(), "ta dao ta hao hu qu le");
//! ```
#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

mod error;

pub mod deromanizer;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod romanizer;
pub mod subword;
pub mod synth;
pub mod tables;
pub mod vocabtransfer;

pub use error::{Error, Result};
