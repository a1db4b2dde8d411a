//! Deterministic emission of tables and reports, written atomically.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use piezosaw::numfmt::sig12;
use serde::Serialize;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Provenance line: artifact version followed by key=value pairs.
pub fn provenance(pairs: &[(&str, String)]) -> String {
    let mut s = format!("piezosaw {}", env!("CARGO_PKG_VERSION"));
    for (k, v) in pairs {
        s.push(' ');
        s.push_str(k);
        s.push('=');
        s.push_str(v);
    }
    s
}

pub struct Table {
    pub provenance: String,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                let mut out = format!("# {}\n{}\n", self.provenance, self.columns.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|x| sig12(*x)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                Ok(out)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(r)
                            .map(|(c, x)| (c.to_string(), number(*x)))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = serde_json::json!({ "provenance": self.provenance, "rows": rows });
                Ok(serde_json::to_string_pretty(&doc)? + "\n")
            }
        }
    }
}

fn number(x: f64) -> Value {
    let rounded: f64 = sig12(x).parse().unwrap_or(x);
    Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

/// Rounds every float in a JSON tree to 12 significant digits.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => *v = number(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// A scalar report as pretty JSON, or as key,value lines.
pub fn render_record<T: Serialize>(record: &T, provenance: &str, format: Format) -> Result<String> {
    let mut v = serde_json::to_value(record)?;
    round_floats(&mut v);
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&v)? + "\n"),
        Format::Csv => {
            let mut pairs = Vec::new();
            flatten("", &v, &mut pairs);
            let mut out = format!("# {provenance}\nkey,value\n");
            for (k, x) in pairs {
                out.push_str(&format!("{k},{x}\n"));
            }
            Ok(out)
        }
    }
}

/// Writes to `path` through a temporary file in the same directory, or to stdout.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        return Ok(stdout.flush()?);
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
