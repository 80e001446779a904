use std::fmt;
use std::io::{self, Write};

use serde_json::{Map, Value};

/// Output encodings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl Cell {
    pub fn as_real(&self) -> Option<f64> {
        match *self {
            Cell::Real(v) => Some(v),
            Cell::Int(v) => Some(v as f64),
            Cell::Text(_) => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Real(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

/// Shortest representation that parses back to the same double.
impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Real(v) => write!(f, "{v:?}"),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) if s.contains([',', '"', '\n']) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

/// A named table with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub parameters: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, columns: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Dataset {
            name: name.into(),
            parameters: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_parameter(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.parameters.push((key.into(), value.to_string()));
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the column count");
        self.rows.push(row);
    }

    /// Numeric values of one column, or `None` if it is missing or textual.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[i].as_real()).collect()
    }

    pub fn text_column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows
            .iter()
            .map(|r| match &r[i] {
                Cell::Text(s) => Some(s.as_str()),
                _ => None,
            })
            .collect()
    }

    /// `generated` is the optional timestamp line; leave it out for
    /// byte-identical output.
    pub fn write_csv<W: Write>(&self, mut out: W, generated: Option<&str>) -> io::Result<()> {
        writeln!(out, "# {} {} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"), self.name)?;
        if let Some(ts) = generated {
            writeln!(out, "# generated: {ts}")?;
        }
        for (k, v) in &self.parameters {
            writeln!(out, "# {k}: {v}")?;
        }
        writeln!(out, "# columns: {}", self.columns.join(","))?;
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self, generated: Option<&str>) -> Value {
        let mut root = Map::new();
        root.insert("artifact".into(), Value::from(env!("CARGO_PKG_NAME")));
        root.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        root.insert("dataset".into(), Value::from(self.name.as_str()));
        if let Some(ts) = generated {
            root.insert("generated".into(), Value::from(ts));
        }
        let params: Map<String, Value> =
            self.parameters.iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
        root.insert("parameters".into(), Value::Object(params));
        root.insert("columns".into(), Value::from(self.columns.clone()));
        let records = self
            .rows
            .iter()
            .map(|row| Value::Object(self.columns.iter().cloned().zip(row.iter().map(Cell::to_json)).collect()))
            .collect();
        root.insert("records".into(), Value::Array(records));
        Value::Object(root)
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W, generated: Option<&str>) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out, generated),
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json(generated))?;
                writeln!(out)
            }
        }
    }
}
