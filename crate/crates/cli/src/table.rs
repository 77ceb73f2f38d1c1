use std::io::Write;

use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
    Json,
}

/// A table cell; numbers stay numbers in JSON output.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.6}"),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64((*v * 1e6).round() / 1e6)
                .map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

/// Seed and crate version, stamped on every table.
#[derive(Debug, Clone, Copy)]
pub struct Provenance {
    pub seed: u64,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write(&self, out: &mut dyn Write, format: Format, prov: Provenance) -> CliResult<()> {
        let version = env!("CARGO_PKG_VERSION");
        let fail = |e: &dyn std::fmt::Display| CliError::Output(e.to_string());
        match format {
            Format::Csv | Format::Tsv => {
                writeln!(out, "# seed={} version={version}", prov.seed).map_err(|e| fail(&e))?;
                let delim = if format == Format::Csv { b',' } else { b'\t' };
                let mut w = csv::WriterBuilder::new().delimiter(delim).from_writer(out);
                w.write_record(&self.headers).map_err(|e| fail(&e))?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::text))
                        .map_err(|e| fail(&e))?;
                }
                w.flush().map_err(|e| fail(&e))?;
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .headers
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.to_string(), c.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = serde_json::json!({
                    "seed": prov.seed,
                    "version": version,
                    "rows": rows,
                });
                serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| fail(&e))?;
                writeln!(out).map_err(|e| fail(&e))?;
            }
        }
        Ok(())
    }

    pub fn to_string(&self, format: Format, prov: Provenance) -> CliResult<String> {
        let mut buf = Vec::new();
        self.write(&mut buf, format, prov)?;
        String::from_utf8(buf).map_err(|e| CliError::Output(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![1u32.into(), "x,y".into()]);
        let prov = Provenance { seed: 7 };
        let csv = t.to_string(Format::Csv, prov).unwrap();
        assert!(csv.starts_with("# seed=7 version="));
        assert!(csv.ends_with("a,b\n1,\"x,y\"\n"));
        let tsv = t.to_string(Format::Tsv, prov).unwrap();
        assert!(tsv.ends_with("a\tb\n1\tx,y\n"));
        let json: Value = serde_json::from_str(&t.to_string(Format::Json, prov).unwrap()).unwrap();
        assert_eq!(json["rows"][0]["a"], 1);
        assert_eq!(json["seed"], 7);
    }

    #[test]
    fn empty_table_has_header() {
        let t = Table::new(&["n"]);
        let csv = t.to_string(Format::Csv, Provenance { seed: 0 }).unwrap();
        assert_eq!(csv.lines().count(), 2);
    }
}
