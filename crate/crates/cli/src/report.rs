use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::ExperimentConfig;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Per-command output: scalar summary plus the row table that the CSV
/// projection flattens.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Results {
    pub summary: Value,
    pub rows: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub results: Results,
    pub warnings: Vec<String>,
    /// Wall-clock seconds per phase; only filled on request, since it
    /// breaks byte-for-byte reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// One CSV line per results row; nested fields become dotted columns
    /// and arrays are joined with `;`.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let flat: Vec<Vec<(String, String)>> = self
            .results
            .rows
            .iter()
            .map(|r| {
                let mut out = Vec::new();
                flatten("", r, &mut out);
                out
            })
            .collect();
        let mut header: Vec<String> = Vec::new();
        for row in &flat {
            for (k, _) in row {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
        let err = |e: csv::Error| CliError::Output { path: "<csv>".into(), detail: e.to_string() };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).map_err(err)?;
        for row in &flat {
            let lookup: BTreeMap<&str, &str> = row.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
            w.write_record(header.iter().map(|h| lookup.get(h.as_str()).copied().unwrap_or(""))).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output { path: "<csv>".into(), detail: e.to_string() })?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => flatten_map(prefix, m, out),
        other => out.push((if prefix.is_empty() { "value".into() } else { prefix.into() }, scalar(other))),
    }
}

fn flatten_map(prefix: &str, m: &Map<String, Value>, out: &mut Vec<(String, String)>) {
    for (k, v) in m {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(inner) => flatten_map(&key, inner, out),
            other => out.push((key, scalar(other))),
        }
    }
}
