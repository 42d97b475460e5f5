//! Tabular output. Files are written to a temporary sibling and renamed into
//! place, so a failed run never leaves a partial file behind.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context};
use deltalwi_core::GainSpectrum;
use serde_json::{json, Map, Value};

use crate::config::ParamValue;

pub const SPECTRUM_COLUMNS: [&str; 6] = ["detuning", "gain", "pop_diff", "s11", "s22", "s33"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?}, expected csv or json")),
        }
    }
}

/// Named columns of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn spectrum_table(spectrum: &GainSpectrum) -> Table {
    let mut t = Table::new(&SPECTRUM_COLUMNS);
    for r in &spectrum.records {
        t.push(vec![r.detuning, r.gain, r.pop_diff, r.s11, r.s22, r.s33]);
    }
    t
}

// 17 significant digits round-trip every f64 exactly
fn number(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_params(params: &[(&str, ParamValue)]) -> Value {
    let map: Map<String, Value> = params
        .iter()
        .map(|(k, v)| {
            let value = match v {
                ParamValue::Num(x) => json!(x),
                ParamValue::Text(s) => json!(s),
            };
            (k.to_string(), value)
        })
        .collect();
    Value::Object(map)
}

/// Serialises `table`; identical inputs give identical bytes.
pub fn render(table: &Table, params: &[(&str, ParamValue)], format: Format) -> anyhow::Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(|v| number(*v)))?;
            }
            Ok(w.into_inner()?)
        }
        Format::Json => {
            let records: Vec<Value> = table
                .rows
                .iter()
                .map(|row| Value::Object(table.columns.iter().cloned().zip(row.iter().map(|v| json!(v))).collect()))
                .collect();
            let doc = json!({ "params": json_params(params), "records": records });
            let mut bytes = serde_json::to_vec_pretty(&doc)?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write {}", path.display()))?;
    tmp.write_all(bytes).with_context(|| format!("cannot write {}", path.display()))?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn write_table(table: &Table, params: &[(&str, ParamValue)], format: Format, path: &Path) -> anyhow::Result<()> {
    write_atomic(path, &render(table, params, format)?)
}

/// Writes a spectrum with columns `detuning,gain,pop_diff,s11,s22,s33`.
pub fn write_spectrum(spectrum: &GainSpectrum, format: Format, path: &Path) -> anyhow::Result<()> {
    let params =
        [("kind", ParamValue::Text(spectrum.kind.label().into())), ("phi", ParamValue::Num(spectrum.loop_phase))];
    write_table(&spectrum_table(spectrum), &params, format, path)
}

/// Reads a table written in CSV format.
pub fn read_csv_table(path: &Path) -> anyhow::Result<Table> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut table = Table { columns, rows: Vec::new() };
    for (k, record) in r.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("{}: row {}", path.display(), k + 1))?;
        if row.len() != table.columns.len() {
            bail!("{}: row {} has {} fields", path.display(), k + 1, row.len());
        }
        table.rows.push(row);
    }
    Ok(table)
}
