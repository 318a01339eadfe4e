//! CSV tables with a `#` header block.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliError;

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Vec<f64> {
        let i = self.columns.iter().position(|c| c == name).expect("known column");
        self.rows.iter().map(|r| r[i]).collect()
    }
}

/// Twelve significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn render_csv(header: &[String], table: &Table) -> String {
    let mut out = String::new();
    for line in header {
        for part in line.lines() {
            let _ = writeln!(out, "# {part}");
        }
    }
    let _ = writeln!(out, "{}", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| num(v)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// `fig.csv` + `static` -> `fig_static.csv`.
pub fn sibling(path: &Path, label: &str) -> std::path::PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{label}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{label}"),
    };
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_twelve_significant_digits() {
        assert_eq!(num(1.5e9), "1.50000000000e9");
        assert_eq!(num(-1.0 / 3.0), "-3.33333333333e-1");
    }

    #[test]
    fn header_lines_are_prefixed() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![1.0, 2.0]);
        let text = render_csv(&["x\ny".into()], &t);
        assert_eq!(text, "# x\n# y\na,b\n1.00000000000e0,2.00000000000e0\n");
    }

    #[test]
    fn sibling_inserts_label() {
        assert_eq!(sibling(Path::new("out/fig.csv"), "static"), Path::new("out/fig_static.csv"));
        assert_eq!(sibling(Path::new("fig"), "b"), Path::new("fig_b"));
    }
}
