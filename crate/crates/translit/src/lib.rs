//! File formats, streaming IO and the `translit` command-line tool on top of
//! [`translit_core`].

pub mod cli;
pub mod error;
pub mod formats;
pub mod io;

pub use error::{CliError, Result};
