//! Output documents: a JSON value plus a flat table for CSV.

use serde_json::{json, Map, Value};
use std::io::Write;

pub const SCHEMA: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<I: IntoIterator<Item = S>, S: ToString>(&mut self, row: I) {
        self.rows.push(row.into_iter().map(|s| s.to_string()).collect());
    }

    /// Two-column table of the scalar fields of a JSON object.
    pub fn from_fields(v: &Value) -> Self {
        let mut t = Table::new(&["field", "value"]);
        if let Value::Object(m) = v {
            for (k, x) in m {
                match x {
                    Value::String(s) => t.push([k.as_str(), s.as_str()]),
                    _ => t.push([k.clone(), x.to_string()]),
                }
            }
        }
        t
    }
}

pub struct Doc {
    pub verb: &'static str,
    pub body: Value,
    pub table: Table,
}

impl Doc {
    pub fn new(verb: &'static str, body: Value, table: Table) -> Self {
        Doc { verb, body, table }
    }

    fn json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("verb".into(), json!(self.verb));
        if let Value::Object(b) = &self.body {
            m.extend(b.clone());
        } else {
            m.insert("result".into(), self.body.clone());
        }
        Value::Object(m)
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> anyhow::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json())?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.table.header)?;
                for r in &self.table.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}
