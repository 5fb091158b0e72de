//! Run records, CSV tables and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub message: String,
    /// Structured cause for errors raised by the numerical core.
    pub cause: Option<landau1d::Error>,
}

/// One JSON document per run: the resolved configuration, the code
/// version, the seed, and either a result or the error that stopped it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord<C, R> {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: C,
    pub result: Option<R>,
    pub error: Option<ErrorRecord>,
}

impl<C: Serialize, R: Serialize> RunRecord<C, R> {
    pub fn new(command: &str, seed: u64, config: C, outcome: Result<R, landau1d::Error>) -> Self {
        let (result, error) = match outcome {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(ErrorRecord { message: e.to_string(), cause: Some(e) })),
        };
        Self { command: command.to_string(), version: VERSION.to_string(), seed, config, result, error }
    }

    pub fn to_json(&self) -> Result<String, String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| format!("cannot serialize record: {e}"))?;
        s.push('\n');
        Ok(s)
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), String> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes()).and_then(|_| out.flush()).map_err(|e| format!("stdout: {e}"))
        }
        Some(p) => write_atomic(p, contents.as_bytes()),
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), String> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    tmp.write_all(bytes).and_then(|_| tmp.flush()).map_err(|e| format!("{}: {e}", path.display()))?;
    tmp.persist(path).map_err(|e| format!("{}: {}", path.display(), e.error))?;
    Ok(())
}

/// One CSV cell.
pub enum Cell<'a> {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(&'a str),
}

impl From<f64> for Cell<'_> {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell<'_> {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl<'a> From<&'a str> for Cell<'a> {
    fn from(v: &'a str) -> Self {
        Cell::Text(v)
    }
}

/// Header row plus rows, floats in `{:.16e}` (17 significant digits).
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Self { buf, columns: header.len() }
    }

    pub fn row(&mut self, cells: &[Cell<'_>]) {
        debug_assert_eq!(cells.len(), self.columns);
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            let _ = match c {
                Cell::Num(v) => write!(self.buf, "{v:.16e}"),
                Cell::Int(v) => write!(self.buf, "{v}"),
                Cell::Bool(v) => write!(self.buf, "{v}"),
                Cell::Text(v) => write!(self.buf, "{v}"),
            };
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
