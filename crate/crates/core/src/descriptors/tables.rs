//! Loader for the bundled contribution tables.
//!
//! Each table is a tab-separated text file whose header carries the number
//! of data rows and a 64-bit FNV-1a checksum of the data rows joined by
//! newlines. Both are verified before any row is used.

use super::DescriptorError;

pub(crate) const CRIPPEN_TSV: &str = include_str!("../../data/crippen.tsv");
pub(crate) const TPSA_TSV: &str = include_str!("../../data/tpsa.tsv");

pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Returns the data rows of `text` split on tabs after checking the
/// declared row count and checksum.
pub(crate) fn load_rows(name: &str, text: &str) -> Result<Vec<Vec<String>>, DescriptorError> {
    let mut declared_rows = None;
    let mut declared_sum = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(meta) = line.strip_prefix('#') {
            let meta = meta.trim();
            if let Some(v) = meta.strip_prefix("rows:") {
                declared_rows = v.trim().parse::<usize>().ok();
            } else if let Some(v) = meta.strip_prefix("fnv1a64:") {
                declared_sum = u64::from_str_radix(v.trim(), 16).ok();
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        rows.push(line);
    }
    let corrupt = |reason: String| DescriptorError::Table {
        table: name.to_string(),
        reason,
    };
    let expected = declared_rows.ok_or_else(|| corrupt("missing row count".into()))?;
    if expected != rows.len() {
        return Err(corrupt(format!("declares {expected} rows, found {}", rows.len())));
    }
    let sum = declared_sum.ok_or_else(|| corrupt("missing checksum".into()))?;
    let actual = fnv1a64(rows.join("\n").as_bytes());
    if sum != actual {
        return Err(corrupt(format!("checksum {actual:016x} does not match {sum:016x}")));
    }
    Ok(rows
        .into_iter()
        .map(|r| r.split('\t').map(str::to_string).collect())
        .collect())
}
