//! Tables rendered as CSV or JSON with identical column names.

use std::io::{self, Write};
use std::str::FromStr;

use pxmap::{Int, Rat};
use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(Int),
    Rat(Rat),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<Int> for Cell {
    fn from(x: Int) -> Self {
        Cell::Int(x)
    }
}

impl From<Rat> for Cell {
    fn from(x: Rat) -> Self {
        Cell::Rat(x)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(x: $t) -> Self {
                Cell::Int(Int::from(x))
            }
        }
    )*};
}

int_cell!(i64, u64, u32, usize, pxmap::Nat);

/// Rationals print as `n` when integral, otherwise `num/den`.
pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn exact_number(x: &Int) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integer literal"))
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(x) => x.to_string(),
            Cell::Rat(x) => format_rat(x),
            Cell::Float(x) => x.to_string(),
            Cell::Bool(x) => x.to_string(),
            Cell::Text(s) => csv_field(s),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(x) => exact_number(x),
            Cell::Rat(x) => {
                let mut m = Map::new();
                m.insert("num".into(), exact_number(x.numer()));
                m.insert("den".into(), exact_number(x.denom()));
                Value::Object(m)
            }
            Cell::Float(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Bool(x) => Value::Bool(*x),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(name: &str, columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    fn json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Writes one or more tables. A lone table is written bare; several are
/// written as `# name` sections separated by blank lines (CSV) or as an
/// object keyed by name (JSON).
pub fn emit(out: &mut dyn Write, format: Format, tables: &[Table]) -> io::Result<()> {
    match format {
        Format::Csv => {
            if let [only] = tables {
                return only.write_csv(out);
            }
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "# {}", t.name)?;
                t.write_csv(out)?;
            }
            Ok(())
        }
        Format::Json => {
            let value = match tables {
                [only] => only.json(),
                _ => Value::Object(tables.iter().map(|t| (t.name.clone(), t.json())).collect()),
            };
            serde_json::to_writer_pretty(&mut *out, &value)?;
            writeln!(out)
        }
    }
}
