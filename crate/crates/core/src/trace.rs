//! Per-iteration trace files.
//!
//! Comma separated with one header line:
//!
//! ```text
//! l,t,x1,...,xn,new_values,z_star,mu,dmax
//! ```
//!
//! `t` is the position of the subdivided interval in the interval list,
//! `x1..xn` the point placed on its diagonal, and `new_values` the objective
//! values at the freshly evaluated vertices, separated by `;`.

use std::fmt::Write as _;

use crate::engine::IterationEvent;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub l: usize,
    pub t: usize,
    pub point: Vec<f64>,
    pub new_values: Vec<f64>,
    pub z_star: f64,
    pub mu: f64,
    pub dmax: f64,
}

impl TraceRow {
    pub fn from_event(e: &IterationEvent<'_>) -> Self {
        Self {
            l: e.l,
            t: e.selected_index,
            point: e.point.to_vec(),
            new_values: e.new_values.to_vec(),
            z_star: e.z_star,
            mu: e.mu,
            dmax: e.dmax,
        }
    }

    pub fn to_line(&self) -> String {
        let mut out = format!("{},{}", self.l, self.t);
        for x in &self.point {
            let _ = write!(out, ",{x}");
        }
        let values: Vec<String> = self.new_values.iter().map(|v| v.to_string()).collect();
        let _ = write!(out, ",{},{},{},{}", values.join(";"), self.z_star, self.mu, self.dmax);
        out
    }
}

pub fn header(n: usize) -> String {
    let coords: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    format!("l,t,{},new_values,z_star,mu,dmax", coords.join(","))
}

/// Number of trials implied by a trace: the two initial corners plus every
/// freshly evaluated vertex.
pub fn evaluation_count(rows: &[TraceRow]) -> usize {
    2 + rows.iter().map(|r| r.new_values.len()).sum::<usize>()
}

pub fn parse(text: &str) -> Result<Vec<TraceRow>> {
    let mut lines = text.lines().enumerate();
    let (_, head) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty trace".into(),
    })?;
    let n = header_dimension(head.trim_end()).ok_or_else(|| Error::Parse {
        line: 1,
        msg: "malformed trace header".into(),
    })?;

    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        rows.push(parse_row(line, n, idx + 1)?);
    }
    Ok(rows)
}

fn header_dimension(head: &str) -> Option<usize> {
    let cols: Vec<&str> = head.split(',').collect();
    if cols.len() < 7 || cols[..2] != ["l", "t"] || cols[cols.len() - 4..] != ["new_values", "z_star", "mu", "dmax"] {
        return None;
    }
    let coords = &cols[2..cols.len() - 4];
    let ok = coords
        .iter()
        .enumerate()
        .all(|(i, c)| c.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) == Some(i + 1));
    ok.then_some(coords.len())
}

fn parse_row(line: &str, n: usize, lineno: usize) -> Result<TraceRow> {
    let err = |msg: String| Error::Parse { line: lineno, msg };
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != n + 6 {
        return Err(err(format!("expected {} fields, found {}", n + 6, fields.len())));
    }
    let real = |s: &str| -> Result<f64> {
        let v: f64 = s.parse().map_err(|e| err(format!("bad number `{s}`: {e}")))?;
        if v.is_nan() {
            return Err(err("NaN in trace".into()));
        }
        Ok(v)
    };
    let int = |s: &str| -> Result<usize> { s.parse().map_err(|e| err(format!("bad integer `{s}`: {e}"))) };

    let point = fields[2..2 + n].iter().map(|s| real(s)).collect::<Result<Vec<_>>>()?;
    let values_field = fields[2 + n];
    let new_values = if values_field.is_empty() {
        Vec::new()
    } else {
        values_field.split(';').map(real).collect::<Result<Vec<_>>>()?
    };
    Ok(TraceRow {
        l: int(fields[0])?,
        t: int(fields[1])?,
        point,
        new_values,
        z_star: real(fields[n + 3])?,
        mu: real(fields[n + 4])?,
        dmax: real(fields[n + 5])?,
    })
}
