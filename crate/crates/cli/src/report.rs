//! Rendering of reports as text, JSON or CSV.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

use entropic_energy::explorer::{write_csv, ScanRecord};
use entropic_energy::{Bits, LogBase};

use crate::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

enum Row {
    Quantity(f64),
    Number(f64),
    Text(String),
    Flag(bool),
}

/// An ordered list of named values. Information quantities are converted to
/// the output base here and nowhere else.
pub struct Table {
    title: String,
    base: LogBase,
    rows: Vec<(String, Row)>,
}

impl Table {
    pub fn new(title: &str, base: LogBase) -> Table {
        Table { title: title.into(), base, rows: Vec::new() }
    }

    pub fn quantity(&mut self, name: &str, v: Bits) {
        self.rows.push((name.into(), Row::Quantity(v.in_base(self.base))));
    }

    pub fn number(&mut self, name: &str, v: f64) {
        self.rows.push((name.into(), Row::Number(v)));
    }

    pub fn text(&mut self, name: &str, v: &str) {
        self.rows.push((name.into(), Row::Text(v.into())));
    }

    pub fn flag(&mut self, name: &str, v: bool) {
        self.rows.push((name.into(), Row::Flag(v)));
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        let unit = self.base.unit();
        Ok(match format {
            Format::Text => {
                let mut s = String::new();
                for (name, row) in &self.rows {
                    let v = match row {
                        Row::Quantity(x) => format!("{x:.6} {unit}"),
                        Row::Number(x) => x.to_string(),
                        Row::Text(t) => t.clone(),
                        Row::Flag(b) => b.to_string(),
                    };
                    s += &format!("{name} = {v}\n");
                }
                s
            }
            Format::Json => {
                let mut values = Map::new();
                for (name, row) in &self.rows {
                    let v = match row {
                        Row::Quantity(x) | Row::Number(x) => json!(x),
                        Row::Text(t) => json!(t),
                        Row::Flag(b) => json!(b),
                    };
                    values.insert(name.clone(), v);
                }
                serde_json::to_string_pretty(&json!({ "report": self.title, "unit": unit, "values": values }))? + "\n"
            }
            Format::Csv => {
                let mut s = String::from("name,value\n");
                for (name, row) in &self.rows {
                    let v = match row {
                        Row::Quantity(x) => format!("{x:.12}"),
                        Row::Number(x) => format!("{x:.12e}"),
                        Row::Text(t) => format!("\"{}\"", t.replace('"', "\"\"")),
                        Row::Flag(b) => b.to_string(),
                    };
                    s += &format!("\"{name}\",{v}\n");
                }
                s
            }
        })
    }
}

pub fn scale_records(records: &mut [ScanRecord], base: LogBase) {
    for r in records {
        r.h = Bits(r.h.in_base(base));
        r.a = Bits(r.a.in_base(base));
        r.m = Bits(r.m.in_base(base));
    }
}

pub fn render_records<M: Serialize>(records: &[ScanRecord], meta: &M, format: Format) -> anyhow::Result<Outcome> {
    let text = match format {
        Format::Csv | Format::Text => {
            let mut buf = Vec::new();
            write_csv(records, &mut buf)?;
            String::from_utf8(buf)?
        }
        Format::Json => {
            let mut v = serde_json::to_value(meta)?;
            if let Value::Object(m) = &mut v {
                m.insert("records".into(), serde_json::to_value(records)?);
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
    };
    Ok(Outcome { text, failed: false })
}
