use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use ionscreen::datasets::{read_records, write_records, Format, SystemRecord};

use crate::error::{CliError, CliResult};

pub fn read_input(path: Option<&Path>) -> CliResult<String> {
    let mut text = String::new();
    match path {
        Some(p) => {
            File::open(p)
                .and_then(|mut f| f.read_to_string(&mut text))
                .map_err(|e| CliError::io(p, e))?;
        }
        None => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::new("E_IO", format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

pub fn create_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn write_all(path: Option<&Path>, text: &str) -> CliResult<()> {
    let mut out = create_output(path)?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| output_error(path, e))
}

pub fn output_error(path: Option<&Path>, e: io::Error) -> CliError {
    match path {
        Some(p) => CliError::io(p, e),
        None => CliError::new("E_IO", format!("stdout: {e}")),
    }
}

/// One entry of a SMILES list file.
pub struct SmilesLine {
    pub line: usize,
    pub smiles: String,
    pub name: Option<String>,
}

/// SMILES list: one molecule per line, optionally followed by whitespace
/// and a name. Blank lines and lines starting with `#` are skipped.
pub fn parse_smiles_list(text: &str) -> Vec<SmilesLine> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                return None;
            }
            let mut parts = line.splitn(2, char::is_whitespace);
            let smiles = parts.next().unwrap_or_default().to_string();
            let name = parts.next().map(|n| n.trim().to_string()).filter(|n| !n.is_empty());
            Some(SmilesLine {
                line: i + 1,
                smiles,
                name,
            })
        })
        .collect()
}

pub fn read_smiles_list(path: Option<&Path>) -> CliResult<Vec<SmilesLine>> {
    Ok(parse_smiles_list(&read_input(path)?))
}

pub fn record_format(path: Option<&Path>, flag: Option<Format>) -> Format {
    flag.or_else(|| path.map(Format::from_path)).unwrap_or(Format::Csv)
}

pub fn load_records(path: Option<&Path>, flag: Option<Format>) -> CliResult<Vec<SystemRecord>> {
    let format = record_format(path, flag);
    let records = match path {
        Some(p) => {
            let f = File::open(p).map_err(|e| CliError::io(p, e))?;
            read_records(BufReader::new(f), format)
        }
        None => read_records(io::stdin().lock(), format),
    };
    records.map_err(|e| {
        let mut err = CliError::from(e);
        if let Some(p) = path {
            err.message = format!("{}: {}", p.display(), err.message);
        }
        err
    })
}

pub fn save_records(
    path: Option<&Path>,
    flag: Option<Format>,
    records: &[SystemRecord],
) -> CliResult<()> {
    let format = record_format(path, flag);
    let mut out = create_output(path)?;
    write_records(&mut out, records, format)
        .and_then(|_| out.flush())
        .map_err(|e| output_error(path, e))
}

/// Lines of a pool file, canonicalized and deduplicated in order.
pub fn read_pool(path: &Path) -> CliResult<Vec<String>> {
    let mut seen = HashSet::new();
    let mut out: Vec<String> = Vec::new();
    for entry in read_smiles_list(Some(path))? {
        let c = ionscreen::chem::canonicalize(&entry.smiles).map_err(|e| {
            CliError::new("E_SMILES", format!("{}:{}: {e}", path.display(), entry.line))
        })?;
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Ok(out)
}
