//! Report rendering: versioned JSON, CSV rows, or plain text lines.

use std::io::Write;

use serde_json::{Map, Value};

use crate::Format;

pub const SCHEMA: u64 = 1;

pub struct Report {
    json: Map<String, Value>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    text: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut json = Map::new();
        json.insert("schema".into(), SCHEMA.into());
        json.insert("command".into(), command.into());
        Report {
            json,
            header: Vec::new(),
            rows: Vec::new(),
            text: Vec::new(),
        }
    }

    pub fn field(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.json.insert(key.into(), v.into());
        self
    }

    pub fn value<T: serde::Serialize>(
        &mut self,
        key: &str,
        v: &T,
    ) -> Result<&mut Self, serde_json::Error> {
        self.json.insert(key.into(), serde_json::to_value(v)?);
        Ok(self)
    }

    pub fn header(&mut self, cols: &[&str]) -> &mut Self {
        self.header = cols.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn set_elapsed(&mut self, ms: u64) {
        self.json.insert("elapsed_ms".into(), ms.into());
        self.text.push(format!("elapsed_ms: {ms}"));
    }

    pub fn render(&self, format: Format) -> Result<String, Box<dyn std::error::Error>> {
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&Value::Object(self.json.clone()))?;
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            Format::Text => {
                let mut s = self.text.join("\n");
                s.push('\n');
                s
            }
        })
    }
}

pub fn write(path: &str, text: &str) -> std::io::Result<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()
    } else {
        std::fs::write(path, text)
    }
}
