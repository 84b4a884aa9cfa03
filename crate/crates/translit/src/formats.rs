//! On-disk formats: mapping tables and embedding matrices.
//!
//! # Embedding matrices
//!
//! Both layouts start with an ASCII header line `N D\n` (rows, columns).
//!
//! * TSV: `N` lines follow, each with `D` tab-separated decimal numbers.
//! * Binary: `N * D` IEEE-754 `f32` values follow the header, little-endian,
//!   row-major, with no padding or trailer.
//!
//! Files ending in `.bin` are read and written as binary, anything else as
//! TSV, unless a format is given explicitly.

use std::fs;
use std::io::Write;
use std::path::Path;

use translit_core::romanizer::MappingTable;
use translit_core::tables;
use translit_core::vocabtransfer::Embeddings;

use crate::error::{CliError, Result};
use crate::io::open_output;

/// Loads a mapping table from a TSV file, or a bundled table by name
/// (`cyrillic`, `mandarin`, `hebrew`, `toy`) when no such file exists.
pub fn load_table(spec: &str) -> Result<MappingTable> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
        return MappingTable::from_tsv(name, &text).map_err(|e| match e {
            translit_core::Error::Parse { line, message } => CliError::data(path, line, message),
            other => other.into(),
        });
    }
    tables::by_name(spec).ok_or_else(|| {
        CliError::Usage(format!(
            "no table file {spec:?} and no bundled table of that name (bundled: {})",
            tables::NAMES.join(", ")
        ))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EmbeddingFormat {
    Auto,
    Tsv,
    Bin,
}

impl EmbeddingFormat {
    fn resolve(self, path: &Path) -> EmbeddingFormat {
        match self {
            EmbeddingFormat::Auto if path.extension().is_some_and(|e| e == "bin") => EmbeddingFormat::Bin,
            EmbeddingFormat::Auto => EmbeddingFormat::Tsv,
            other => other,
        }
    }
}

fn parse_header(path: &Path, line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(n)), Some(Ok(d)), None) => Ok((n, d)),
        _ => Err(CliError::data(path, 1, "expected header `N D`")),
    }
}

pub fn read_embeddings(path: &Path, format: EmbeddingFormat) -> Result<Embeddings> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let split = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| CliError::data(path, 1, "missing header line"))?;
    let header = std::str::from_utf8(&bytes[..split]).map_err(|_| CliError::data(path, 1, "invalid header"))?;
    let (rows, dim) = parse_header(path, header)?;
    let body = &bytes[split + 1..];
    let values = match format.resolve(path) {
        EmbeddingFormat::Bin => {
            if body.len() != rows * dim * 4 {
                return Err(CliError::data(
                    path,
                    1,
                    format!("expected {} bytes of f32 data, found {}", rows * dim * 4, body.len()),
                ));
            }
            body.chunks_exact(4)
                .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                .collect()
        }
        _ => {
            let text = std::str::from_utf8(body).map_err(|_| CliError::data(path, 2, "invalid UTF-8"))?;
            let mut values = Vec::with_capacity(rows * dim);
            let mut seen = 0;
            for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                let number = i + 2;
                let row: Vec<f32> = line
                    .split('\t')
                    .map(|v| v.trim().parse::<f32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| CliError::data(path, number, e.to_string()))?;
                if row.len() != dim {
                    return Err(CliError::data(
                        path,
                        number,
                        format!("expected {dim} columns, found {}", row.len()),
                    ));
                }
                values.extend(row);
                seen += 1;
            }
            if seen != rows {
                return Err(CliError::data(
                    path,
                    1,
                    format!("header promises {rows} rows, found {seen}"),
                ));
            }
            values
        }
    };
    Ok(Embeddings::new(rows, dim, values)?)
}

pub fn write_embeddings(path: &Path, emb: &Embeddings, format: EmbeddingFormat) -> Result<()> {
    let mut out = open_output(path)?;
    let io = |e| CliError::io(path, e);
    writeln!(out, "{} {}", emb.rows(), emb.dim()).map_err(io)?;
    match format.resolve(path) {
        EmbeddingFormat::Bin => {
            for v in emb.values() {
                out.write_all(&v.to_le_bytes()).map_err(io)?;
            }
        }
        _ => {
            for i in 0..emb.rows() {
                let row: Vec<String> = emb.row(i).iter().map(f32::to_string).collect();
                writeln!(out, "{}", row.join("\t")).map_err(io)?;
            }
        }
    }
    out.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Embeddings {
        Embeddings::new(3, 2, vec![0.5, -1.0, 2.25, 3.0, 1e-3, 7.0]).unwrap()
    }

    #[test]
    fn both_formats_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["e.tsv", "e.bin"] {
            let path = dir.path().join(name);
            write_embeddings(&path, &sample(), EmbeddingFormat::Auto).unwrap();
            assert_eq!(read_embeddings(&path, EmbeddingFormat::Auto).unwrap(), sample());
        }
        let bin = fs::read(dir.path().join("e.bin")).unwrap();
        assert_eq!(bin.len(), 4 + 6 * 4);
    }

    #[test]
    fn row_count_and_width_are_checked() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.tsv");
        fs::write(&path, "2 2\n1\t2\n").unwrap();
        let err = read_embeddings(&path, EmbeddingFormat::Tsv).unwrap_err();
        assert!(err.to_string().contains("promises 2 rows"), "{err}");
        fs::write(&path, "1 2\n1\t2\t3\n").unwrap();
        let err = read_embeddings(&path, EmbeddingFormat::Tsv).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
        fs::write(&path, "1 2\nabc").unwrap();
        assert!(read_embeddings(&path, EmbeddingFormat::Bin).is_err());
    }

    #[test]
    fn bundled_and_file_tables() {
        assert_eq!(load_table("cyrillic").unwrap().name(), "cyrillic");
        assert!(matches!(load_table("nope"), Err(CliError::Usage(_))));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mine.tsv");
        fs::write(&path, "x\tks\n").unwrap();
        let table = load_table(path.to_str().unwrap()).unwrap();
        assert_eq!(table.name(), "mine");
        assert_eq!(table.len(), 1);
    }
}
