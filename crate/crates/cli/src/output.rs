//! Atomic tabular output: every file is written to a temporary sibling and
//! renamed into place, so readers never observe a half-written table.
//! CSV uses '.' decimals, a header row with units, newline-terminated
//! records.

use anyhow::{Context, Result};
use std::io::Write;
use std::path::Path;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)
            .with_context(|| format!("cannot create {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all().ok();
    }
    std::fs::rename(&tmp, path)
        .with_context(|| format!("cannot move {} into place", path.display()))?;
    Ok(())
}

/// Minimal CSV assembly; numbers are formatted with enough digits to
/// round-trip f64 exactly, keeping seeded reruns bit-identical.
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Self {
            buf,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, fields: &[CsvField]) {
        assert_eq!(fields.len(), self.columns, "column count mismatch");
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            match f {
                CsvField::Int(v) => self.buf.push_str(&v.to_string()),
                CsvField::Float(v) => {
                    let mut s = format!("{v:?}");
                    // `{:?}` prints f64 with round-trip precision but
                    // renders NaN/inf in non-CSV-friendly casing; normalize.
                    if !v.is_finite() {
                        s = if v.is_nan() {
                            "nan".into()
                        } else if *v > 0.0 {
                            "inf".into()
                        } else {
                            "-inf".into()
                        };
                    }
                    self.buf.push_str(&s);
                }
                CsvField::Str(s) => self.buf.push_str(s),
            }
        }
        self.buf.push('\n');
    }

    pub fn write(self, path: &Path) -> Result<()> {
        write_atomic(path, self.buf.as_bytes())
    }
}

pub enum CsvField {
    Int(i64),
    Float(f64),
    Str(String),
}

impl From<f64> for CsvField {
    fn from(v: f64) -> Self {
        CsvField::Float(v)
    }
}

impl From<usize> for CsvField {
    fn from(v: usize) -> Self {
        CsvField::Int(v as i64)
    }
}

impl From<&str> for CsvField {
    fn from(v: &str) -> Self {
        CsvField::Str(v.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_f64() {
        let mut csv = Csv::new(&["a", "b"]);
        csv.row(&[0.1f64.into(), (1.0f64 / 3.0).into()]);
        let text = csv.buf;
        let line = text.lines().nth(1).unwrap();
        let vals: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(vals[0], 0.1);
        assert_eq!(vals[1], 1.0 / 3.0);
    }
}
