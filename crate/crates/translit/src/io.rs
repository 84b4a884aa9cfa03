//! Line-oriented corpus IO. A path of `-` stands for standard input or
//! output.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, Result};

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

pub fn open_input(path: &Path) -> Result<Box<dyn BufRead>> {
    if is_stdio(path) {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(Box::new(BufReader::new(file)))
}

pub fn open_output(path: &Path) -> Result<Box<dyn Write>> {
    if is_stdio(path) {
        return Ok(Box::new(BufWriter::new(io::stdout())));
    }
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(Box::new(BufWriter::new(file)))
}

/// Calls `f` on every line without holding the whole input in memory.
/// Line numbers passed to `f` start at 1.
pub fn for_each_line(path: &Path, mut f: impl FnMut(usize, &str) -> Result<()>) -> Result<()> {
    let mut reader = open_input(path)?;
    let mut buf = Vec::new();
    let mut number = 0;
    loop {
        buf.clear();
        let n = reader.read_until(b'\n', &mut buf).map_err(|e| CliError::io(path, e))?;
        if n == 0 {
            return Ok(());
        }
        number += 1;
        if buf.last() == Some(&b'\n') {
            buf.pop();
            if buf.last() == Some(&b'\r') {
                buf.pop();
            }
        }
        let line = std::str::from_utf8(&buf).map_err(|_| CliError::data(path, number, "invalid UTF-8"))?;
        f(number, line)?;
    }
}

pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let mut lines = Vec::new();
    for_each_line(path, |_, line| {
        lines.push(line.to_string());
        Ok(())
    })?;
    Ok(lines)
}

pub fn write_lines<S: AsRef<str>>(path: &Path, lines: &[S]) -> Result<()> {
    let mut out = open_output(path)?;
    for line in lines {
        writeln!(out, "{}", line.as_ref()).map_err(|e| CliError::io(path, e))?;
    }
    out.flush().map_err(|e| CliError::io(path, e))
}

/// Reads a two-column TSV file. Every line needs exactly one tab.
pub fn read_tsv_pairs(path: &Path) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for_each_line(path, |number, line| {
        let mut fields = line.split('\t');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => {
                pairs.push((a.to_string(), b.to_string()));
                Ok(())
            }
            _ => Err(CliError::data(
                path,
                number,
                "expected exactly two tab-separated columns",
            )),
        }
    })?;
    Ok(pairs)
}

/// A parallel corpus given either as one two-column TSV file or as a pair of
/// line-aligned files.
pub fn read_parallel(paths: &[PathBuf]) -> Result<(Vec<String>, Vec<String>)> {
    match paths {
        [tsv] => Ok(read_tsv_pairs(tsv)?.into_iter().unzip()),
        [src, tgt] => {
            let source = read_lines(src)?;
            let target = read_lines(tgt)?;
            if source.len() != target.len() {
                return Err(translit_core::Error::LengthMismatch(source.len(), target.len()).into());
            }
            Ok((source, target))
        }
        _ => Err(CliError::Usage(
            "expected one TSV file or two line-aligned files".into(),
        )),
    }
}

pub fn write_parallel(paths: &[PathBuf], source: &[String], target: &[String]) -> Result<()> {
    match paths {
        [tsv] => {
            let mut out = open_output(tsv)?;
            for (s, t) in source.iter().zip(target) {
                writeln!(out, "{s}\t{t}").map_err(|e| CliError::io(tsv, e))?;
            }
            out.flush().map_err(|e| CliError::io(tsv, e))
        }
        [src, tgt] => {
            write_lines(src, source)?;
            write_lines(tgt, target)
        }
        _ => Err(CliError::Usage("expected one TSV file or two output files".into())),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let reader = open_input(path)?;
    serde_json::from_reader(reader).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

/// Pretty-printed JSON followed by a newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })?;
    writeln!(out)
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    #[test]
    fn crlf_and_missing_final_newline() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.txt");
        fs::write(&path, "one\r\ntwo\n\nthree").unwrap();
        assert_eq!(read_lines(&path).unwrap(), ["one", "two", "", "three"]);
    }

    #[test]
    fn invalid_utf8_reports_its_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.txt");
        fs::write(&path, b"ok\n\xff\n").unwrap();
        assert!(matches!(read_lines(&path), Err(CliError::Data { line: 2, .. })));
    }

    #[test]
    fn tsv_pairs_need_exactly_two_columns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.tsv");
        fs::write(&path, "a\tb\n\t\nc\td\te\n").unwrap();
        assert!(matches!(read_tsv_pairs(&path), Err(CliError::Data { line: 3, .. })));
        fs::write(&path, "a\tb\n\t\n").unwrap();
        assert_eq!(
            read_tsv_pairs(&path).unwrap(),
            [("a".to_string(), "b".to_string()), (String::new(), String::new())]
        );
    }

    #[test]
    fn parallel_files_round_trip_in_both_layouts() {
        let dir = tempfile::tempdir().unwrap();
        let source = vec!["x".to_string(), "y".to_string()];
        let target = vec!["X".to_string(), "Y".to_string()];
        let tsv = vec![dir.path().join("p.tsv")];
        let two = vec![dir.path().join("p.src"), dir.path().join("p.tgt")];
        for paths in [&tsv, &two] {
            write_parallel(paths, &source, &target).unwrap();
            assert_eq!(read_parallel(paths).unwrap(), (source.clone(), target.clone()));
        }
        fs::write(&two[1], "X\n").unwrap();
        assert!(matches!(
            read_parallel(&two),
            Err(CliError::Core(translit_core::Error::LengthMismatch(2, 1)))
        ));
    }
}
