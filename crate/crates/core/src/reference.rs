//! Plain-text table of reference optima.
//!
//! One record per line, whitespace separated, columns in this order:
//!
//! ```text
//! id  n  value  x_1 ... x_n
//! ```
//!
//! `value` is the objective at the minimizer `x`. A problem with several
//! global minimizers has one line per minimizer. Blank lines and lines
//! starting with `#` are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRecord {
    pub id: u32,
    pub n: usize,
    pub value: f64,
    pub minimizer: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceTable {
    pub records: Vec<ReferenceRecord>,
}

impl ReferenceTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            records.push(parse_record(line, idx + 1)?);
        }
        Ok(Self { records })
    }

    pub fn lookup(&self, id: u32, n: usize) -> impl Iterator<Item = &ReferenceRecord> {
        self.records.iter().filter(move |r| r.id == id && r.n == n)
    }

    pub fn to_text(&self, header: &str) -> String {
        let mut out = String::new();
        for line in header.lines() {
            let _ = writeln!(out, "# {line}");
        }
        for r in &self.records {
            let _ = write!(out, "{} {} {}", r.id, r.n, r.value);
            for c in &r.minimizer {
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
        out
    }
}

fn parse_record(line: &str, lineno: usize) -> Result<ReferenceRecord> {
    let err = |msg: String| Error::Parse { line: lineno, msg };
    let mut fields = line.split_whitespace();

    let id: u32 = fields
        .next()
        .ok_or_else(|| err("missing id".into()))?
        .parse()
        .map_err(|e| err(format!("bad id: {e}")))?;
    if id == 0 {
        return Err(err("id must be positive".into()));
    }
    let n: usize = fields
        .next()
        .ok_or_else(|| err("missing dimension".into()))?
        .parse()
        .map_err(|e| err(format!("bad dimension: {e}")))?;
    if n == 0 {
        return Err(err("dimension must be positive".into()));
    }

    let mut numbers = Vec::new();
    for field in fields {
        let v: f64 = field.parse().map_err(|e| err(format!("bad number `{field}`: {e}")))?;
        if !v.is_finite() {
            return Err(err(format!("non-finite number `{field}`")));
        }
        numbers.push(v);
    }
    if numbers.len().checked_sub(1) != Some(n) {
        return Err(err(format!(
            "expected value and {n} coordinates, found {} numbers",
            numbers.len()
        )));
    }
    let value = numbers.remove(0);
    Ok(ReferenceRecord {
        id,
        n,
        value,
        minimizer: numbers,
    })
}
