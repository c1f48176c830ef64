//! CSV and JSON emission shared by the subcommands.

use std::io::Write;
use std::path::Path;

use crate::error::CliResult;

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

/// Writes `header` and `rows` as CSV into a byte buffer.
pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut w = csv_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Sends `bytes` to `path` when given, otherwise to `out`.
pub fn emit(path: Option<&Path>, bytes: &[u8], out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, bytes),
        None => {
            out.write_all(bytes)?;
            Ok(())
        }
    }
}

pub fn json_bytes<T: serde::Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s.into_bytes())
}
