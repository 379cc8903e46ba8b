use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comma-delimited table with a header row; short rows are padded with
/// empty cells.
pub fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0).max(header.len());
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let mut padded: Vec<&str> = cells.iter().map(String::as_str).collect();
        padded.resize(width, "");
        out.push_str(&padded.join(","));
        out.push('\n');
    };
    line(header);
    for row in rows {
        line(row);
    }
    out
}

/// Write via a temporary file in the same directory, then rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name)).map_err(|e| e.error)?;
    Ok(())
}
