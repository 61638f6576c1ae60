//! CSV tables with a `.meta` sidecar.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Twelve significant digits in scientific notation; Rust float formatting
/// ignores the process locale.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => quote(s),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.iter().map(Cell::render).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }
}

pub fn meta_path(path: &Path) -> PathBuf {
    path.with_extension("meta")
}

/// Writes `table` to `path` and its metadata next to it. Nothing is created
/// for an empty table.
pub fn write_table(table: &Table, path: &Path, config_dump: &str, command: &str, wall: Duration) -> Result<(), CliError> {
    if table.rows.is_empty() {
        return Err(CliError::Validation(format!("refusing to write empty table to {}", path.display())));
    }
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    fs::write(path, table.render()).map_err(io)?;

    let mut meta = Vec::new();
    writeln!(meta, "# qdent {command}").map_err(io)?;
    writeln!(meta, "engine_version = {}", env!("CARGO_PKG_VERSION")).map_err(io)?;
    writeln!(meta, "wall_time_seconds = {:.3}", wall.as_secs_f64()).map_err(io)?;
    writeln!(meta, "rows = {}", table.rows.len()).map_err(io)?;
    writeln!(meta, "columns = {}", table.header.join(", ")).map_err(io)?;
    writeln!(meta, "# config").map_err(io)?;
    meta.extend_from_slice(config_dump.as_bytes());
    let mpath = meta_path(path);
    fs::write(&mpath, meta).map_err(|e| CliError::Io(format!("{}: {e}", mpath.display())))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_twelve_significant_digits() {
        assert_eq!(format_number(-19.859123456789), "-1.98591234568e1");
        assert_eq!(format_number(0.5), "5.00000000000e-1");
        assert_eq!(format_number(f64::NAN), "nan");
        let back: f64 = format_number(std::f64::consts::PI).parse().unwrap();
        assert!((back - std::f64::consts::PI).abs() < 1e-11);
    }

    #[test]
    fn text_with_commas_is_quoted() {
        assert_eq!(Cell::from("a, \"b\"").render(), "\"a, \"\"b\"\"\"");
        assert_eq!(Cell::from(None).render(), "");
    }

    #[test]
    fn one_row_gives_two_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut t = Table::new(vec!["x", "y"]);
        t.push(vec![1.0.into(), 2usize.into()]);
        write_table(&t, &path, "x = 1\n", "test", Duration::ZERO).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "x,y\n1.00000000000e0,2\n");
        assert!(!text.contains('\r'));
        assert!(fs::read_to_string(meta_path(&path)).unwrap().contains("engine_version"));
    }

    #[test]
    fn empty_table_creates_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        let err = write_table(&Table::new(vec!["x"]), &path, "", "test", Duration::ZERO).unwrap_err();
        assert!(matches!(err, CliError::Validation(_)));
        assert!(!path.exists() && !meta_path(&path).exists());
    }

    #[test]
    fn unwritable_destination_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("t.csv");
        let mut t = Table::new(vec!["x"]);
        t.push(vec![1.0.into()]);
        assert!(matches!(write_table(&t, &path, "", "test", Duration::ZERO), Err(CliError::Io(_))));
    }
}
