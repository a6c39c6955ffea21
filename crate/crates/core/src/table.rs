//! Plot-ready CSV tables.
//!
//! A file is a block of `# key: value` metadata lines, a header row and one
//! numeric row per record. Missing cells are written as `NA`, values with
//! 17 significant digits so that a read-back is bit-exact. Lines end in LF.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const NA: &str = "NA";

/// A header, numeric rows and ordered metadata entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
    pub metadata: Vec<(String, String)>,
}

/// Render one cell. Non-finite values other than infinities become `NA`.
pub fn format_cell(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_nan() => NA.to_string(),
        Some(x) if x.is_infinite() => if x > 0.0 { "inf" } else { "-inf" }.to_string(),
        Some(x) => format!("{x:.16e}"),
        None => NA.to_string(),
    }
}

fn parse_cell(s: &str) -> Result<Option<f64>> {
    let s = s.trim();
    if s == NA {
        return Ok(None);
    }
    s.parse::<f64>().map(Some).map_err(|_| Error::Io(format!("not a number: {s:?}")))
}

impl CurveTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        CurveTable { header: header.into_iter().map(Into::into).collect(), rows: Vec::new(), metadata: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<Option<f64>>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::domain(format!("row has {} cells, header has {}", row.len(), self.header.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Append a metadata entry. Line breaks in the value are flattened.
    pub fn push_meta(&mut self, key: &str, value: impl AsRef<str>) {
        let v = value.as_ref().replace(['\r', '\n'], " ");
        self.metadata.push((key.to_string(), v));
    }

    /// First metadata value under `key`.
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn meta_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.metadata.iter().filter(move |(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Value of column `name` in the row whose first column equals `key`.
    pub fn lookup(&self, key: f64, name: &str) -> Option<f64> {
        let j = self.column_index(name)?;
        self.rows.iter().find(|r| r[0] == Some(key)).and_then(|r| r[j])
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            if k.contains(':') || k.contains('\n') {
                return Err(Error::domain(format!("invalid metadata key {k:?}")));
            }
            let _ = writeln!(out, "# {k}: {v}");
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| format_cell(*v)))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        out.push_str(std::str::from_utf8(&bytes).map_err(|e| Error::Io(e.to_string()))?);
        Ok(out)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_csv_string()?.as_bytes())?;
        Ok(())
    }

    pub fn write_path(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv_string()?)?;
        Ok(())
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut metadata = Vec::new();
        let mut body = String::new();
        for line in s.lines() {
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.strip_prefix(' ').unwrap_or(rest);
                let (k, v) = rest.split_once(": ").unwrap_or((rest.trim_end_matches(':'), ""));
                metadata.push((k.to_string(), v.to_string()));
            } else if !line.is_empty() {
                body.push_str(line);
                body.push('\n');
            }
        }
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            rows.push(rec.iter().map(parse_cell).collect::<Result<Vec<_>>>()?);
        }
        Ok(CurveTable { header, rows, metadata })
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut s = String::new();
        r.read_to_string(&mut s)?;
        Self::from_csv_str(&s)
    }

    pub fn read_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_use_seventeen_significant_digits() {
        assert_eq!(format_cell(Some(40.0844)), "4.0084400000000002e1");
        assert_eq!(format_cell(None), "NA");
        assert_eq!(format_cell(Some(f64::NAN)), "NA");
        assert_eq!(format_cell(Some(f64::INFINITY)), "inf");
    }

    #[test]
    fn round_trip_is_exact() {
        let mut t = CurveTable::new(["c", "a", "b"]);
        t.push_meta("seed", "7");
        t.push_meta("warning", "two\nlines");
        t.push_row(vec![Some(0.1), Some(1.0 / 3.0), None]).unwrap();
        t.push_row(vec![Some(0.2), Some(-2.5e-300), Some(f64::INFINITY)]).unwrap();
        let s = t.to_csv_string().unwrap();
        assert!(!s.contains('\r'));
        assert!(s.starts_with("# seed: 7\n# warning: two lines\nc,a,b\n"));
        let back = CurveTable::from_csv_str(&s).unwrap();
        assert_eq!(back.header, t.header);
        assert_eq!(back.rows, t.rows);
        assert_eq!(back.meta("warning"), Some("two lines"));
        assert_eq!(back.to_csv_string().unwrap(), s);
        assert_eq!(back.lookup(0.2, "a"), Some(-2.5e-300));
    }

    #[test]
    fn row_width_is_checked() {
        let mut t = CurveTable::new(["c", "a"]);
        assert!(t.push_row(vec![Some(1.0)]).is_err());
    }
}
