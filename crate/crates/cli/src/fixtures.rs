//! The table of published distinct-distance counts.

use std::path::Path;

use anyhow::{bail, Context, Result};
use modhyp::Int;
use serde::{Deserialize, Serialize};

pub const EMBEDDED_TABLE: &str = include_str!("../../../fixtures/section24.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub p: Int,
    pub m: u32,
    pub a: Int,
    pub expected_count: Int,
}

/// Parses `p,m,a,expected_count` rows; `#` lines are comments.
pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty())
        .map(|l| format!("{l}\n"))
        .collect();
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["p", "m", "a", "expected_count"] {
        bail!("expected header p,m,a,expected_count, got {:?}", headers);
    }
    let rows = reader
        .deserialize()
        .enumerate()
        .map(|(i, r)| r.with_context(|| format!("table row {}", i + 1)))
        .collect::<Result<Vec<TableRow>>>()?;
    if rows.is_empty() {
        bail!("table has no rows");
    }
    Ok(rows)
}

pub fn load_table(path: Option<&Path>) -> Result<Vec<TableRow>> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_table(&text)
        }
        None => parse_table(EMBEDDED_TABLE),
    }
}
