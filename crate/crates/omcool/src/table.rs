//! Tabular results and their CSV form.
//!
//! A table is a header, rows of cells and a list of `key: value` metadata
//! pairs written as leading `#` lines. Floats use Rust's shortest
//! round-trip formatting, so reading a table back gives identical values.

use std::fmt;
use std::io::{self, Write};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Cell::Bool(b) => Some(*b),
            _ => None,
        }
    }

    fn parse(field: &str) -> Cell {
        match field {
            "" => Cell::Empty,
            "true" => Cell::Bool(true),
            "false" => Cell::Bool(false),
            _ => match field.parse::<f64>() {
                Ok(x) => Cell::Num(x),
                Err(_) => Cell::Text(field.to_string()),
            },
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(x) => write!(f, "{x}"),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<Option<bool>> for Cell {
    fn from(x: Option<bool>) -> Self {
        x.map_or(Cell::Empty, Cell::Bool)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("row {row} has {found} cells, header has {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("malformed metadata line `{0}`")]
    Metadata(String),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new(columns: Vec<String>) -> Self {
        ResultTable {
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.set_meta(key, value);
        self
    }

    pub fn set_meta(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), TableError> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::WriterBuilder::new().from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn from_csv(text: &str) -> Result<ResultTable, TableError> {
        let mut metadata = Vec::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else {
                break;
            };
            let (k, v) = rest
                .trim()
                .split_once(": ")
                .ok_or_else(|| TableError::Metadata(line.trim_end().to_string()))?;
            metadata.push((k.to_string(), v.to_string()));
            body_start += line.len();
        }
        let mut r = csv::ReaderBuilder::new().from_reader(&text.as_bytes()[body_start..]);
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            if rec.len() != columns.len() {
                return Err(TableError::Ragged {
                    row: i,
                    found: rec.len(),
                    expected: columns.len(),
                });
            }
            rows.push(rec.iter().map(Cell::parse).collect());
        }
        Ok(ResultTable {
            metadata,
            columns,
            rows,
        })
    }

    /// CSV without the metadata lines.
    pub fn body_csv(&self) -> String {
        let mut t = self.clone();
        t.metadata.clear();
        t.to_csv_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_survive_round_trip() {
        let mut t = ResultTable::new(vec!["x".into(), "y".into(), "ok".into(), "label".into()])
            .with_meta("preset", "demo")
            .with_meta("axes", "cavities.a.decay");
        let xs = [0.1, 1e-5, 1.0 / 3.0, 2.0f64.sqrt() * 1e300, -0.0, 5e-324];
        for x in xs {
            t.push(vec![x.into(), Cell::Empty, true.into(), "J=eta=0".into()]);
        }
        let text = t.to_csv_string();
        assert!(text.starts_with("# preset: demo\n# axes: cavities.a.decay\nx,y,ok,label\n"));
        let back = ResultTable::from_csv(&text).unwrap();
        assert_eq!(back, t);
        for (row, x) in back.rows.iter().zip(xs) {
            assert_eq!(row[0].as_f64().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = ResultTable::from_csv("a,b\n1,2\n3\n").unwrap_err();
        assert!(matches!(
            err,
            TableError::Csv(_) | TableError::Ragged { .. }
        ));
    }

    #[test]
    fn metadata_update() {
        let mut t = ResultTable::new(vec!["a".into()]);
        t.set_meta("k", "1");
        t.set_meta("k", "2");
        assert_eq!(t.metadata.len(), 1);
        assert_eq!(t.meta("k"), Some("2"));
    }
}
