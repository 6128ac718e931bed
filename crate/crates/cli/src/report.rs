use std::fmt;

use serde::Serialize;
use willmore_core::immersion::SIGN_CONVENTION;

use crate::args::Format;
use crate::Failure;

pub const SCHEMA: &str = "1";

/// Fields shared by every JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub schema: &'static str,
    pub signs: &'static str,
    pub command: &'static str,
}

impl Header {
    pub fn new(command: &'static str) -> Self {
        Self {
            schema: SCHEMA,
            signs: SIGN_CONVENTION,
            command,
        }
    }
}

/// A computed number with its estimated discretization error (`None` when
/// no coarser comparison is available).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: Option<f64>,
}

impl Estimate {
    pub fn new(value: f64, error: Option<f64>) -> Self {
        Self { value, error }
    }

    /// Error taken as the gap to a coarser evaluation.
    pub fn against(value: f64, coarse: Option<f64>) -> Self {
        Self {
            value,
            error: coarse.map(|c| (value - c).abs()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Debug is the shortest round-trip form, with exponents for extremes
            Cell::Num(x) => write!(f, "{x:?}"),
            Cell::Int(x) => write!(f, "{x}"),
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

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Failure::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string())).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
    }
}

/// A finished report in both renderings.
#[derive(Clone, Debug)]
pub struct Rendered {
    pub json: serde_json::Value,
    pub table: Table,
}

impl Rendered {
    pub fn new(json: &impl Serialize, table: Table) -> Result<Self, Failure> {
        let json = serde_json::to_value(json).map_err(|e| Failure::Io(e.to_string()))?;
        Ok(Self { json, table })
    }

    pub fn text(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json)
                .map(|s| s + "\n")
                .map_err(|e| Failure::Io(e.to_string())),
            Format::Csv => self.table.to_csv(),
        }
    }
}
