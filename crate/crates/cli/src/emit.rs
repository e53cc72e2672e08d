//! Tables and their CSV/JSON rendering.

use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

/// Fixed-point text with `precision` decimals. `.` separator regardless of locale.
pub fn fixed(value: f64, precision: usize) -> String {
    if value.is_finite() {
        let text = format!("{value:.precision$}");
        // avoid "-0.000000"
        if text.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
            text.trim_start_matches('-').to_string()
        } else {
            text
        }
    } else {
        value.to_string()
    }
}

/// `value` rounded the same way [`fixed`] prints it.
pub fn rounded(value: f64, precision: usize) -> f64 {
    if value.is_finite() {
        fixed(value, precision).parse().unwrap_or(value)
    } else {
        value
    }
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn to_csv(&self, precision: usize) -> io::Result<Vec<u8>> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(|cell| match cell {
                Cell::Int(v) => v.to_string(),
                Cell::Float(v) => fixed(*v, precision),
                Cell::Text(s) => s.clone(),
                Cell::Empty => String::new(),
            }))?;
        }
        writer.into_inner().map_err(|e| e.into_error())
    }

    pub fn to_json_value(&self, precision: usize) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| {
                        let value = match cell {
                            Cell::Int(v) => Value::from(*v),
                            // non-finite floats become null
                            Cell::Float(v) => Value::from(rounded(*v, precision)),
                            Cell::Text(s) => Value::from(s.as_str()),
                            Cell::Empty => Value::Null,
                        };
                        (name.to_string(), value)
                    })
                    .collect();
                Value::Object(object)
            })
            .collect();
        Value::Array(rows)
    }

    pub fn render(&self, format: Format, precision: usize) -> io::Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(precision),
            Format::Json => json_bytes(&self.to_json_value(precision)),
        }
    }
}

pub fn json_bytes(value: &Value) -> io::Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes `bytes` to stdout, or atomically replaces `path` through a temporary
/// file in the same directory.
pub fn write_output(bytes: &[u8], path: Option<&Path>) -> io::Result<()> {
    match path {
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(parent) if !parent.as_os_str().is_empty() => parent,
                _ => Path::new("."),
            };
            let mut file = tempfile::NamedTempFile::new_in(dir)?;
            file.write_all(bytes)?;
            file.as_file().sync_all()?;
            file.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
