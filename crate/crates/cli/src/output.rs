//! Report encodings.
//!
//! JSON is canonical: keys sorted, two-space indent, floats in shortest
//! round-trip form, trailing newline. Parsing an emitted document and
//! re-emitting it gives the same bytes.
//!
//! CSV files start with a `#` comment naming the table and its column-set
//! version, then a header row.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use varbound::bounds::BoundSuite;
use varbound::scenarios::{Check, Expected, ScenarioResult};

use crate::error::{CliError, CliResult};

pub const CSV_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn canonical_json<T: Serialize>(value: &T) -> CliResult<String> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Invariant(format!("serializing report: {e}")))?;
    reformat(&v)
}

/// Re-emit an already parsed document in canonical form.
pub fn reformat(value: &serde_json::Value) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Invariant(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn float(x: f64) -> String {
    match serde_json::Number::from_f64(x) {
        Some(n) => n.to_string(),
        None => format!("{x}"),
    }
}

pub const SUITE_COLUMNS: [&str; 20] = [
    "lhs_sum",
    "variance_a",
    "variance_b",
    "hr_lhs",
    "hr_rhs",
    "mp1_plus",
    "mp1_minus",
    "mp1_best",
    "mp2",
    "mp2_av",
    "m12a",
    "max_bound",
    "self_referential",
    "slack_hr",
    "slack_mp1_plus",
    "slack_mp1_minus",
    "slack_mp1_best",
    "slack_mp2",
    "slack_m12a",
    "scale",
];

pub fn suite_row(s: &BoundSuite) -> Vec<String> {
    let mut row: Vec<String> = [
        s.lhs_sum,
        s.variance_a,
        s.variance_b,
        s.hr.lhs_product,
        s.hr.rhs,
        s.mp1_plus,
        s.mp1_minus,
        s.mp1_best,
        s.mp2,
    ]
    .into_iter()
    .map(float)
    .collect();
    row.push(s.mp2_av.map(float).unwrap_or_default());
    row.push(float(s.m12a));
    row.push(float(s.max_bound));
    row.push(s.self_referential.to_string());
    let k = &s.slacks;
    row.extend(
        [k.hr, k.mp1_plus, k.mp1_minus, k.mp1_best, k.mp2, k.m12a, s.scale]
            .into_iter()
            .map(float),
    );
    row
}

/// A CSV table: comment line, header, rows.
pub fn csv_table(kind: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Invariant(format!("writing csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    let body = w.into_inner().map_err(|e| CliError::Invariant(e.to_string()))?;
    let mut out = format!("# varbound {kind} v{CSV_VERSION}\n");
    out.push_str(&String::from_utf8(body).map_err(|e| CliError::Invariant(e.to_string()))?);
    Ok(out)
}

pub fn suite_text(s: &BoundSuite) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(out, "{k:<18} {v}");
    };
    line("lhs_sum", float(s.lhs_sum));
    line("variance_a", float(s.variance_a));
    line("variance_b", float(s.variance_b));
    line("hr lhs", float(s.hr.lhs_product));
    line("hr rhs", float(s.hr.rhs));
    line("mp1_plus", float(s.mp1_plus));
    line("mp1_minus", float(s.mp1_minus));
    line("mp1_best", float(s.mp1_best));
    line("mp2", float(s.mp2));
    line("mp2 (perp path)", s.mp2_av.map(float).unwrap_or_else(|| "-".into()));
    line("m12a", float(s.m12a));
    line("max_bound", float(s.max_bound));
    line("self_referential", s.self_referential.to_string());
    line("scale", float(s.scale));
    out
}

fn expected_text(e: &Expected) -> String {
    match *e {
        Expected::Equals(v) => format!("= {}", float(v)),
        Expected::AtMost(v) => format!("<= {}", float(v)),
        Expected::GreaterThan(v) => format!("> {}", float(v)),
    }
}

pub fn check_rows(checks: &[Check]) -> Vec<Vec<String>> {
    checks
        .iter()
        .map(|c| {
            vec![
                c.label.clone(),
                float(c.computed),
                expected_text(&c.expected),
                float(c.tolerance),
                if c.pass { "pass" } else { "FAIL" }.to_string(),
            ]
        })
        .collect()
}

pub const CHECK_COLUMNS: [&str; 5] = ["label", "computed", "expected", "tolerance", "result"];

pub fn scenario_text(r: &ScenarioResult) -> String {
    let rows = check_rows(&r.checks);
    let mut widths = CHECK_COLUMNS.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = format!("scenario: {}\n", r.name);
    let mut emit = |cells: &[String]| {
        let line: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "  {}", line.join("  ").trim_end());
    };
    emit(&CHECK_COLUMNS.map(String::from));
    for row in &rows {
        emit(row);
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(out, "{}", r.summary);
    let _ = writeln!(out, "verdict: {}", if r.verdict { "PASS" } else { "FAIL" });
    out
}
