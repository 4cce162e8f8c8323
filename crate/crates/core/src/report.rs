//! Output formats: fixed-precision numbers, single-line JSON records and the
//! inverted-tolerance CSV tables.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bounds::{BoundKind, BoundQuery};
use crate::error::{domain, Error, Result};
use crate::inversion::{epsilon_for_confidence, InversionTarget};
use crate::lab::MonteCarloReport;

/// Formats with 12 significant digits in positional notation, trailing zeros
/// removed. Magnitudes below `1e-300` print as `0`.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < 1e-300 {
        return "0".to_string();
    }
    let sci = format!("{x:.11e}");
    let exponent: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("exponent in scientific format");
    let decimals = (11 - exponent).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    s
}

/// A flat JSON object written with a fixed field order.
#[derive(Debug, Clone, Default)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(mut self, key: &str, raw: String) -> Self {
        self.fields.push((key.to_string(), raw));
        self
    }

    pub fn str(self, key: &str, value: &str) -> Self {
        let quoted = serde_json::to_string(value).expect("string serializes");
        self.push(key, quoted)
    }

    pub fn num(self, key: &str, value: f64) -> Self {
        let raw = if value.is_finite() {
            format_number(value)
        } else {
            "null".to_string()
        };
        self.push(key, raw)
    }

    pub fn int(self, key: &str, value: u64) -> Self {
        self.push(key, value.to_string())
    }

    pub fn bool(self, key: &str, value: bool) -> Self {
        self.push(key, value.to_string())
    }

    pub fn opt_str(self, key: &str, value: Option<&str>) -> Self {
        match value {
            Some(v) => self.str(key, v),
            None => self.push(key, "null".to_string()),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let key = serde_json::to_string(k).expect("string serializes");
            let _ = write!(out, "{key}:{v}");
        }
        out.push('}');
        out
    }
}

/// Inclusive integer range `start, start + step, ..., <= end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DGrid {
    pub start: u64,
    pub end: u64,
    pub step: u64,
}

impl DGrid {
    pub fn new(start: u64, end: u64, step: u64) -> Result<Self> {
        if step == 0 {
            return Err(domain("d grid step must be positive"));
        }
        if start > end {
            return Err(domain(format!("empty d grid {start}..={end}")));
        }
        Ok(DGrid { start, end, step })
    }

    pub fn values(&self) -> impl Iterator<Item = u64> {
        (self.start..=self.end).step_by(self.step as usize)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableSpec {
    pub n: u64,
    pub beta: f64,
    pub r: u64,
    pub d_grid: DGrid,
    pub bounds: Vec<BoundKind>,
}

impl TableSpec {
    pub fn validate(&self) -> Result<()> {
        if self.bounds.is_empty() {
            return Err(domain("table needs at least one bound"));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(domain(format!(
                "beta must lie in (0, 1), got {}",
                self.beta
            )));
        }
        for d in self.d_grid.values() {
            for &kind in &self.bounds {
                kind.validate(&BoundQuery::discard(self.n, d, self.r, 1.0))?;
            }
        }
        Ok(())
    }
}

/// Inverted tolerance for one table cell; `None` when no tolerance reaches beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableCell {
    pub kind: BoundKind,
    pub epsilon: Option<f64>,
}

impl TableCell {
    /// Printed value: the tolerance, or the sentinel one for infeasible cells.
    pub fn value(&self) -> f64 {
        self.epsilon.unwrap_or(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub d: u64,
    pub cells: Vec<TableCell>,
}

impl TableRow {
    pub fn epsilon(&self, kind: BoundKind) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.kind == kind)
            .and_then(|c| c.epsilon)
    }
}

/// Runs every inversion of the table. Rows come back in grid order whatever
/// the thread schedule.
pub fn compute_table(spec: &TableSpec) -> Result<Vec<TableRow>> {
    spec.validate()?;
    let grid: Vec<u64> = spec.d_grid.values().collect();
    grid.par_iter()
        .map(|&d| {
            let cells = spec
                .bounds
                .iter()
                .map(|&kind| {
                    let target = InversionTarget::new(kind, spec.beta, d, spec.r);
                    match epsilon_for_confidence(&target, spec.n) {
                        Ok(eps) => Ok(TableCell {
                            kind,
                            epsilon: Some(eps),
                        }),
                        Err(Error::Infeasible { .. }) => Ok(TableCell {
                            kind,
                            epsilon: None,
                        }),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TableRow { d, cells })
        })
        .collect()
}

/// Header `d,<bound>...,infeasible`; the last column lists infeasible bounds
/// of the row after a `*` marker, or is empty.
pub fn render_table_csv(spec: &TableSpec, rows: &[TableRow]) -> String {
    let mut out = String::from("d");
    for kind in &spec.bounds {
        out.push(',');
        out.push_str(kind.name());
    }
    out.push_str(",infeasible\n");
    for row in rows {
        let _ = write!(out, "{}", row.d);
        for cell in &row.cells {
            out.push(',');
            out.push_str(&format_number(cell.value()));
        }
        out.push(',');
        let infeasible: Vec<&str> = row
            .cells
            .iter()
            .filter(|c| c.epsilon.is_none())
            .map(|c| c.kind.name())
            .collect();
        if !infeasible.is_empty() {
            out.push('*');
            out.push_str(&infeasible.join(";"));
        }
        out.push('\n');
    }
    out
}

/// Parsed form of a table CSV: bound names, then `(d, values, infeasible)` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    pub bounds: Vec<BoundKind>,
    pub rows: Vec<(u64, Vec<f64>, Vec<BoundKind>)>,
}

pub fn parse_table_csv(text: &str) -> Result<ParsedTable> {
    let bad = |msg: &str| Error::Config(format!("malformed table: {msg}"));
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| bad("missing header"))?
        .split(',')
        .collect();
    if header.len() < 3 || header[0] != "d" || header[header.len() - 1] != "infeasible" {
        return Err(bad("unexpected header"));
    }
    let bounds = header[1..header.len() - 1]
        .iter()
        .map(|name| name.parse())
        .collect::<Result<Vec<BoundKind>>>()?;
    let mut rows = Vec::new();
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != bounds.len() + 2 {
            return Err(bad("wrong column count"));
        }
        let d = cols[0].parse().map_err(|_| bad("d is not an integer"))?;
        let values = cols[1..=bounds.len()]
            .iter()
            .map(|v| v.parse::<f64>().map_err(|_| bad("cell is not a number")))
            .collect::<Result<Vec<_>>>()?;
        let flag = cols[cols.len() - 1];
        let infeasible = match flag.strip_prefix('*') {
            Some(names) => names
                .split(';')
                .map(str::parse)
                .collect::<Result<Vec<_>>>()?,
            None if flag.is_empty() => Vec::new(),
            None => return Err(bad("flag column without marker")),
        };
        rows.push((d, values, infeasible));
    }
    Ok(ParsedTable { bounds, rows })
}

/// Outcome of comparing a Monte Carlo report with its bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    /// Upper confidence limit at or below the bound.
    Certified,
    /// Bound below 0.05: too small to certify with the chosen trial count.
    Inconclusive,
    /// A distribution-free bound was exceeded.
    Failed,
    /// A bound relying on extra assumptions was exceeded; not a contradiction
    /// when those assumptions do not hold.
    FailedAssumptionDependent,
}

impl Certification {
    pub fn of(report: &MonteCarloReport) -> Self {
        if report.is_certified() {
            Certification::Certified
        } else if report.theoretical_bound < 0.05 {
            Certification::Inconclusive
        } else if report.bound_kind.is_distribution_free() {
            Certification::Failed
        } else {
            Certification::FailedAssumptionDependent
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Certification::Certified => "certified",
            Certification::Inconclusive => "inconclusive",
            Certification::Failed => "failed",
            Certification::FailedAssumptionDependent => "failed-assumption-dependent",
        }
    }
}
