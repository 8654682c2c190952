//! Whole-file reads with path-aware errors, atomic writes and the shared
//! `#hazard-eeg <kind> v1` header line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

pub fn header(kind: &str) -> String {
    format!("#hazard-eeg {kind} v{FORMAT_VERSION}")
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes `contents` to a temporary file next to `path` and renames it into
/// place, creating parent directories as needed.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| Error::io(&dir, e))?;
    tmp.write_all(contents).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Lines of a text file with their 1-based numbers. An optional first line
/// `#hazard-eeg <kind> v<N>` is checked and skipped.
pub struct Lines<'a> {
    pub path: &'a Path,
    pub lines: Vec<(usize, &'a str)>,
}

impl<'a> Lines<'a> {
    pub fn new(path: &'a Path, text: &'a str, kind: &str) -> Result<Self> {
        let mut lines: Vec<(usize, &str)> = text
            .split('\n')
            .enumerate()
            .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
            .collect();
        if text.ends_with('\n') {
            lines.pop();
        }
        if let Some((_, first)) = lines.first() {
            if let Some(rest) = first.strip_prefix("#hazard-eeg") {
                let mut parts = rest.split_whitespace();
                let found_kind = parts.next().unwrap_or("");
                let version = parts.next().unwrap_or("");
                if found_kind != kind {
                    return Err(Error::SchemaError {
                        path: path.to_path_buf(),
                        line: 1,
                        message: format!("expected a `{kind}` file, found `{found_kind}`"),
                    });
                }
                if version != format!("v{FORMAT_VERSION}") {
                    return Err(Error::VersionMismatch { path: path.to_path_buf(), found: version.to_string() });
                }
                lines.remove(0);
            }
        }
        Ok(Self { path, lines })
    }

    pub fn schema(&self, line: usize, message: impl Into<String>) -> Error {
        Error::SchemaError { path: self.path.to_path_buf(), line, message: message.into() }
    }

    pub fn parse_error(&self, line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::ParseError { path: self.path.to_path_buf(), line, column, message: message.into() }
    }

    pub fn parse_f64(&self, line: usize, column: usize, field: &str) -> Result<f64> {
        match field.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.parse_error(line, column, format!("`{field}` is not a finite number"))),
        }
    }
}
