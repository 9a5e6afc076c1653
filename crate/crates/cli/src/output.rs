//! Artifact emission. Every float is printed as `{:.16e}` (17 significant
//! digits) in CSV and JSON alike, so files round-trip to the same bits and
//! the two formats agree digit for digit.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use pullback_lab::GridFunction;
use serde_json::ser::Formatter;
use serde_json::{json, Value};

use crate::config::Format;
use crate::error::CliError;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Compact JSON with every float in [`num`] form.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(num(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Canonical text of `value`, newline terminated.
pub fn json_text(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    serde::Serialize::serialize(value, &mut ser).expect("serializing a Value cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn states_json(states: &[GridFunction]) -> Value {
    Value::Array(states.iter().map(|u| json!(u.values())).collect())
}

/// `t,x_1,...,x_n`, one row per stored time.
pub fn trajectory_csv(times: &[f64], states: &[GridFunction]) -> String {
    let n = states.first().map_or(0, |u| u.len());
    let mut out = String::from("t");
    for i in 1..=n {
        out.push_str(&format!(",x_{i}"));
    }
    out.push('\n');
    for (t, u) in times.iter().zip(states) {
        out.push_str(&num(*t));
        for v in u.values() {
            out.push(',');
            out.push_str(&num(*v));
        }
        out.push('\n');
    }
    out
}

/// `t,member_id,x_1,...,x_n`, one row per member.
pub fn sample_csv(t: f64, members: &[GridFunction]) -> String {
    let n = members.first().map_or(0, |u| u.len());
    let mut out = String::from("t,member_id");
    for i in 1..=n {
        out.push_str(&format!(",x_{i}"));
    }
    out.push('\n');
    for (id, u) in members.iter().enumerate() {
        out.push_str(&format!("{},{id}", num(t)));
        for v in u.values() {
            out.push(',');
            out.push_str(&num(*v));
        }
        out.push('\n');
    }
    out
}

/// Generic table with a header and float rows.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| num(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Writes artifacts into one directory, all stamped with the same provenance.
pub struct Emitter {
    dir: PathBuf,
    format: Format,
    provenance: Value,
    written: Vec<PathBuf>,
}

impl Emitter {
    pub fn new(dir: &Path, format: Format, provenance: Value) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
            provenance,
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    /// `stem.csv` plus its `stem.meta.json` provenance sidecar.
    pub fn csv(&mut self, stem: &str, text: &str) -> Result<(), CliError> {
        if !self.format.csv() {
            return Ok(());
        }
        self.write(&format!("{stem}.csv"), text)?;
        let meta = json!({ "artifact": format!("{stem}.csv"), "provenance": self.provenance });
        self.write(&format!("{stem}.meta.json"), &json_text(&meta))
    }

    /// `stem.json` holding `{provenance, data}`.
    pub fn json(&mut self, stem: &str, data: Value) -> Result<(), CliError> {
        if !self.format.json() {
            return Ok(());
        }
        let doc = json!({ "provenance": self.provenance, "data": data });
        self.write(&format!("{stem}.json"), &json_text(&doc))
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}
