//! Result rows and their CSV / JSON-lines rendering.
//!
//! CSV columns are `experiment,dist,E,L,trials,seed,estimate,ci_low,ci_high`
//! followed by experiment-specific extras. Reals are written with 17
//! significant digits (`{:.16e}`), so parsing a cell gives back the exact
//! `f64`. Missing values are empty cells (`null` in JSON).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::config::Format;
use crate::error::{Error, Result};

pub const BASE_COLUMNS: [&str; 9] = [
    "experiment", "dist", "E", "L", "trials", "seed", "estimate", "ci_low", "ci_high",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Int(u64),
    Text(String),
    Missing,
}

impl Value {
    pub fn real(x: Option<f64>) -> Self {
        x.map_or(Self::Missing, Self::Real)
    }

    pub fn render(&self) -> String {
        match self {
            Self::Real(x) => render_real(*x),
            Self::Int(i) => i.to_string(),
            Self::Text(s) => s.clone(),
            Self::Missing => String::new(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Self::Real(x) if x.is_finite() => serde_json::json!(x),
            Self::Real(x) => serde_json::Value::String(render_real(*x)),
            Self::Int(i) => serde_json::json!(i),
            Self::Text(s) => serde_json::Value::String(s.clone()),
            Self::Missing => serde_json::Value::Null,
        }
    }
}

pub fn render_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// One grid point of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub experiment: String,
    pub dist: String,
    pub energy: Option<f64>,
    pub length: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub estimate: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub extras: Vec<(String, Value)>,
}

impl ResultRow {
    pub fn cells(&self) -> Vec<(String, Value)> {
        let mut out = vec![
            ("experiment".to_string(), Value::Text(self.experiment.clone())),
            ("dist".to_string(), Value::Text(self.dist.clone())),
            ("E".to_string(), Value::real(self.energy)),
            ("L".to_string(), self.length.map_or(Value::Missing, |l| Value::Int(l as u64))),
            ("trials".to_string(), Value::Int(self.trials as u64)),
            ("seed".to_string(), Value::Int(self.seed)),
            ("estimate".to_string(), Value::real(self.estimate)),
            ("ci_low".to_string(), Value::real(self.ci_low)),
            ("ci_high".to_string(), Value::real(self.ci_high)),
        ];
        out.extend(self.extras.iter().cloned());
        out
    }

    pub fn extra(&self, key: &str) -> Option<&Value> {
        self.extras.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

fn header(rows: &[ResultRow]) -> Vec<String> {
    let mut h: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
    if let Some(first) = rows.first() {
        h.extend(first.extras.iter().map(|(k, _)| k.clone()));
    }
    h
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Renders rows to bytes in the given format.
pub fn render_results(rows: &[ResultRow], format: Format) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut buf);
            let h = header(rows);
            w.write_record(&h).expect("in-memory write");
            for row in rows {
                let cells = row.cells();
                if cells.len() != h.len() || cells.iter().zip(&h).any(|((k, _), col)| k != col) {
                    return Err(Error::Aborted(format!(
                        "row for {} does not match the header columns",
                        row.experiment
                    )));
                }
                w.write_record(cells.iter().map(|(_, v)| v.render())).expect("in-memory write");
            }
            w.flush().expect("in-memory write");
        }
        Format::JsonLines => {
            for row in rows {
                let obj: serde_json::Map<String, serde_json::Value> =
                    row.cells().into_iter().map(|(k, v)| (k, v.to_json())).collect();
                serde_json::to_writer(&mut buf, &obj).expect("in-memory write");
                buf.push(b'\n');
            }
        }
    }
    Ok(buf)
}

/// Writes rows to `path`.
pub fn write_results(rows: &[ResultRow], format: Format, path: &Path) -> Result<()> {
    let bytes = render_results(rows, format)?;
    let mut f = BufWriter::new(File::create(path).map_err(io_err(path))?);
    f.write_all(&bytes).map_err(io_err(path))?;
    f.flush().map_err(io_err(path))
}

/// Fails early if `path` cannot be created for writing.
pub fn preflight(path: &Path) -> Result<()> {
    let existed = path.exists();
    std::fs::OpenOptions::new()
        .write(true)
        .create(true)
        .truncate(false)
        .open(path)
        .map_err(io_err(path))?;
    if !existed {
        std::fs::remove_file(path).map_err(io_err(path))?;
    }
    Ok(())
}

/// Reads a CSV written by [`write_results`] as header plus string records.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e),
    })?;
    let header = r
        .headers()
        .map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(e),
        })?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(e),
        })?;
        rows.push(rec.iter().map(String::from).collect());
    }
    Ok((header, rows))
}
