//! Tables of numbers and their CSV / JSON forms.
//!
//! CSV: UTF-8, comma separated, one header row, LF line endings. Numbers use
//! the shortest representation that parses back to the same f64.
//! JSON: `{"meta": ..., "<column>": [...], ...}` with the CSV column names as
//! keys.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use lmg_core::{Method, PurityTrace, TraceMeta};
use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::{CliError, CliResult};

/// `purity_exact`, `purity_closed_form`, ...
pub fn purity_column(method: Method) -> String {
    format!("purity_{}", method.as_str().replace('-', "_"))
}

pub fn format_number(x: f64) -> String {
    format!("{x:?}")
}

/// Column-labelled numeric data, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(headers: Vec<String>) -> Self {
        Self {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.headers.len(), "row width");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Traces on a shared time grid as `t, purity_<method>...`.
    pub fn from_traces(traces: &[PurityTrace]) -> Self {
        let mut headers = vec!["t".to_string()];
        headers.extend(traces.iter().map(|tr| purity_column(tr.meta.method)));
        let mut table = Table::new(headers);
        if let Some(first) = traces.first() {
            for (k, &t) in first.times.iter().enumerate() {
                let mut row = vec![t];
                row.extend(traces.iter().map(|tr| tr.values[k]));
                table.push(row);
            }
        }
        table
    }

    /// Rebuild one trace per `purity_*` column; `meta` supplies everything
    /// except the method.
    pub fn to_traces(&self, meta: TraceMeta) -> CliResult<Vec<PurityTrace>> {
        let times = self
            .column("t")
            .ok_or_else(|| CliError::Format("table has no `t` column".into()))?;
        Method::ALL
            .iter()
            .filter_map(|&m| self.column(&purity_column(m)).map(|v| (m, v)))
            .map(|(method, values)| {
                Ok(PurityTrace {
                    times: times.clone(),
                    values,
                    meta: TraceMeta { method, ..meta },
                })
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> CliResult<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        let fail = |e: csv::Error| CliError::Format(e.to_string());
        wtr.write_record(&self.headers).map_err(fail)?;
        for row in &self.rows {
            wtr.write_record(row.iter().map(|&x| format_number(x)))
                .map_err(fail)?;
        }
        wtr.flush().map_err(|e| CliError::Format(e.to_string()))
    }

    pub fn read_csv<R: Read>(r: R) -> CliResult<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let fail = |e: csv::Error| CliError::Format(e.to_string());
        let headers = rdr
            .headers()
            .map_err(fail)?
            .iter()
            .map(str::to_string)
            .collect();
        let mut table = Table::new(headers);
        for record in rdr.records() {
            let record = record.map_err(fail)?;
            let row = record
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| CliError::Format(format!("not a number: `{s}`")))
                })
                .collect::<CliResult<Vec<f64>>>()?;
            if row.len() != table.headers.len() {
                return Err(CliError::Format("ragged CSV row".into()));
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn to_json(&self, meta: &impl serde::Serialize) -> CliResult<Value> {
        let mut obj = Map::new();
        obj.insert(
            "meta".into(),
            serde_json::to_value(meta).map_err(|e| CliError::Format(e.to_string()))?,
        );
        for (i, h) in self.headers.iter().enumerate() {
            let col: Vec<Value> = self.rows.iter().map(|r| json_number(r[i])).collect();
            obj.insert(h.clone(), Value::Array(col));
        }
        obj.insert(
            "columns".into(),
            Value::Array(self.headers.iter().cloned().map(Value::String).collect()),
        );
        Ok(Value::Object(obj))
    }

    /// Inverse of [`Table::to_json`]; returns the table and the `meta` value.
    pub fn from_json(value: &Value) -> CliResult<(Self, Value)> {
        let bad = |m: &str| CliError::Format(m.to_string());
        let obj = value.as_object().ok_or_else(|| bad("expected a JSON object"))?;
        let headers: Vec<String> = obj
            .get("columns")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `columns`"))?
            .iter()
            .map(|v| v.as_str().map(str::to_string).ok_or_else(|| bad("bad column name")))
            .collect::<CliResult<_>>()?;
        let cols: Vec<Vec<f64>> = headers
            .iter()
            .map(|h| {
                obj.get(h)
                    .and_then(Value::as_array)
                    .ok_or_else(|| CliError::Format(format!("missing column `{h}`")))?
                    .iter()
                    .map(|v| v.as_f64().ok_or_else(|| bad("non-numeric entry")))
                    .collect()
            })
            .collect::<CliResult<_>>()?;
        let len = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != len) {
            return Err(bad("columns differ in length"));
        }
        let mut table = Table::new(headers);
        for k in 0..len {
            table.rows.push(cols.iter().map(|c| c[k]).collect());
        }
        Ok((table, obj.get("meta").cloned().unwrap_or(Value::Null)))
    }
}

fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn write_json<W: Write>(mut w: W, value: &Value) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Format(e.to_string()))?;
    w.write_all(b"\n").map_err(|e| CliError::Format(e.to_string()))
}

/// Write `table` (plus `meta` for JSON) to `path`, or stdout when `None`.
pub fn emit(
    table: &Table,
    meta: &impl serde::Serialize,
    format: Format,
    path: Option<&Path>,
) -> CliResult<()> {
    let render = |w: &mut dyn Write| -> CliResult<()> {
        match format {
            Format::Csv => table.write_csv(w),
            Format::Json => write_json(w, &table.to_json(meta)?),
        }
    };
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            render(&mut w).map_err(|e| with_path(e, p))?;
            w.flush().map_err(|e| CliError::io(p, e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            render(&mut lock)
        }
    }
}

fn with_path(e: CliError, p: &Path) -> CliError {
    match e {
        CliError::Format(msg) => CliError::io(p, std::io::Error::other(msg)),
        other => other,
    }
}

pub fn write_json_file(path: &Path, value: &Value) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_json(&mut w, value).map_err(|e| with_path(e, path))?;
    w.flush().map_err(|e| CliError::io(path, e))
}
