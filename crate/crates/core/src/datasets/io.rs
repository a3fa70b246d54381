//! CSV and JSONL record files.
//!
//! CSV columns, in order:
//! `cation,anion,solute,solvent,temperature_K,category,property,value,source_id`
//! with the empty string meaning "absent". An optional trailing `units`
//! column is checked against the property's canonical unit. JSONL lines
//! carry the same keys (absent = `null`) plus `schema_version`. Floats are
//! written with nine significant digits.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chem::canonicalize;

use super::{Category, DatasetError, Property, SystemRecord, RECORD_SCHEMA_VERSION};

pub const CSV_COLUMNS: [&str; 9] = [
    "cation",
    "anion",
    "solute",
    "solvent",
    "temperature_K",
    "category",
    "property",
    "value",
    "source_id",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    /// Guesses the format from a file extension (`.jsonl`/`.json` → JSONL).
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "json" | "ndjson") => Format::Jsonl,
            _ => Format::Csv,
        }
    }
}

/// Rounds to nine significant digits and prints the shortest decimal that
/// reads back to the rounded value.
pub fn format_float(x: f64) -> String {
    round9(x).to_string()
}

fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

struct Raw {
    roles: [Option<String>; 4],
    temperature: Option<f64>,
    category: String,
    property: Option<String>,
    value: Option<f64>,
    source_id: String,
    units: Option<String>,
}

fn non_empty(s: &str) -> Option<String> {
    let t = s.trim();
    (!t.is_empty()).then(|| t.to_string())
}

fn parse_opt_float(s: &str, what: &str) -> Result<Option<f64>, String> {
    match non_empty(s) {
        None => Ok(None),
        Some(t) => t
            .parse::<f64>()
            .map(Some)
            .map_err(|_| format!("{what} '{t}' is not a number")),
    }
}

fn finish(raw: Raw) -> Result<SystemRecord, String> {
    let category: Category = raw.category.trim().parse()?;
    let property = raw
        .property
        .as_deref()
        .and_then(non_empty)
        .map(|p| p.parse::<Property>())
        .transpose()?;
    if let (Some(units), Some(p)) = (raw.units.as_deref().and_then(non_empty), property) {
        if units != p.unit() {
            return Err(format!(
                "unit mismatch for {p}: expected {}, found {units}",
                p.unit()
            ));
        }
    }
    let mut record = SystemRecord::new(category);
    for (role, smiles) in super::Role::ORDER.into_iter().zip(raw.roles) {
        let canonical = match smiles.as_deref().and_then(non_empty) {
            None => None,
            Some(s) => Some(canonicalize(&s).map_err(|e| format!("{role} '{s}': {e}"))?),
        };
        record.set_role(role, canonical);
    }
    record.temperature = raw.temperature;
    record.property = property;
    record.value = raw.value;
    record.source_id = raw.source_id;
    record.validate()?;
    Ok(record)
}

/// Drops exact duplicates and rejects conflicting ones.
fn deduplicate(rows: Vec<(usize, SystemRecord)>) -> Result<Vec<SystemRecord>, DatasetError> {
    let mut seen: HashMap<_, (usize, Option<f64>)> = HashMap::new();
    let mut out = Vec::with_capacity(rows.len());
    for (row, record) in rows {
        let key = record.duplicate_key();
        if let Some(&(first, value)) = seen.get(&key) {
            let agree = match (value, record.value) {
                (Some(a), Some(b)) => (a - b).abs() <= 1e-9,
                (None, None) => true,
                _ => false,
            };
            if agree {
                continue;
            }
            return Err(DatasetError::Row {
                row,
                message: format!("conflicts with duplicate system at row {first}"),
            });
        }
        seen.insert(key, (row, record.value));
        out.push(record);
    }
    Ok(out)
}

fn read_csv<R: Read>(reader: R) -> Result<Vec<(usize, SystemRecord)>, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let header_err = |message: String| DatasetError::Row { row: 1, message };
    let headers = rdr.headers().map_err(|e| header_err(e.to_string()))?.clone();
    let names: Vec<&str> = headers.iter().map(str::trim).collect();
    let units_column = match names.len() {
        9 => false,
        10 if names[9] == "units" => true,
        _ => return Err(header_err(format!("expected columns {}", CSV_COLUMNS.join(",")))),
    };
    if names[..9] != CSV_COLUMNS {
        return Err(header_err(format!("expected columns {}", CSV_COLUMNS.join(","))));
    }
    let mut out = Vec::new();
    for result in rdr.records() {
        let rec = result.map_err(|e| DatasetError::Row {
            row: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        let to_row = |message: String| DatasetError::Row { row, message };
        let raw = Raw {
            roles: [0, 1, 2, 3].map(|k| non_empty(&rec[k])),
            temperature: parse_opt_float(&rec[4], "temperature").map_err(to_row)?,
            category: rec[5].to_string(),
            property: non_empty(&rec[6]),
            value: parse_opt_float(&rec[7], "value").map_err(to_row)?,
            source_id: rec[8].to_string(),
            units: if units_column { non_empty(&rec[9]) } else { None },
        };
        out.push((row, finish(raw).map_err(to_row)?));
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonRow {
    #[serde(default)]
    schema_version: Option<u32>,
    cation: Option<String>,
    anion: Option<String>,
    solute: Option<String>,
    solvent: Option<String>,
    #[serde(rename = "temperature_K")]
    temperature_k: Option<f64>,
    category: String,
    property: Option<String>,
    value: Option<f64>,
    #[serde(default)]
    source_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    units: Option<String>,
}

fn read_jsonl<R: Read>(reader: R) -> Result<Vec<(usize, SystemRecord)>, DatasetError> {
    let mut out = Vec::new();
    for (k, line) in BufReader::new(reader).lines().enumerate() {
        let row = k + 1;
        let to_row = |message: String| DatasetError::Row { row, message };
        let line = line.map_err(|e| to_row(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let j: JsonRow = serde_json::from_str(&line).map_err(|e| to_row(e.to_string()))?;
        if let Some(v) = j.schema_version {
            if v > RECORD_SCHEMA_VERSION {
                return Err(to_row(format!("unsupported schema_version {v}")));
            }
        }
        let raw = Raw {
            roles: [j.cation, j.anion, j.solute, j.solvent],
            temperature: j.temperature_k,
            category: j.category,
            property: j.property,
            value: j.value,
            source_id: j.source_id,
            units: j.units,
        };
        out.push((row, finish(raw).map_err(to_row)?));
    }
    Ok(out)
}

/// Reads, canonicalizes, validates and deduplicates records.
pub fn read_records<R: Read>(reader: R, format: Format) -> Result<Vec<SystemRecord>, DatasetError> {
    let rows = match format {
        Format::Csv => read_csv(reader)?,
        Format::Jsonl => read_jsonl(reader)?,
    };
    deduplicate(rows)
}

pub fn load_records(path: &Path, format: Format) -> Result<Vec<SystemRecord>, DatasetError> {
    let file = File::open(path).map_err(|e| DatasetError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    read_records(file, format)
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub fn write_records<W: Write>(
    writer: W,
    records: &[SystemRecord],
    format: Format,
) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(writer);
            w.write_record(CSV_COLUMNS)?;
            for r in records {
                let roles = r.roles().map(|s| s.unwrap_or("").to_string());
                w.write_record([
                    roles[0].as_str(),
                    roles[1].as_str(),
                    roles[2].as_str(),
                    roles[3].as_str(),
                    &opt_float(r.temperature),
                    r.category.name(),
                    r.property.map_or("", Property::name),
                    &opt_float(r.value),
                    &r.source_id,
                ])?;
            }
            w.flush()
        }
        Format::Jsonl => {
            let mut w = BufWriter::new(writer);
            for r in records {
                let row = JsonRow {
                    schema_version: Some(RECORD_SCHEMA_VERSION),
                    cation: r.cation.clone(),
                    anion: r.anion.clone(),
                    solute: r.solute.clone(),
                    solvent: r.solvent.clone(),
                    temperature_k: r.temperature.map(round9),
                    category: r.category.name().to_string(),
                    property: r.property.map(|p| p.name().to_string()),
                    value: r.value.map(round9),
                    source_id: r.source_id.clone(),
                    units: None,
                };
                serde_json::to_writer(&mut w, &row)?;
                w.write_all(b"\n")?;
            }
            w.flush()
        }
    }
}

pub fn save_records(path: &Path, records: &[SystemRecord], format: Format) -> Result<(), DatasetError> {
    let io_err = |e: std::io::Error| DatasetError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let file = File::create(path).map_err(io_err)?;
    write_records(file, records, format).map_err(io_err)
}
