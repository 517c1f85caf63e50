//! Report files: flat records plus a summary block, as JSON or CSV.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use super::config::{Format, RunConfig};
use crate::report::{CheckReport, Regime};

pub const CSV_COLUMNS: [&str; 12] = [
    "check", "n", "m", "point", "lhs", "rhs", "margin", "tol", "regime", "pass", "seed", "trial",
];

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub total: usize,
    pub asserting: usize,
    pub passed: usize,
    pub failed: usize,
    pub informational: usize,
}

/// Per-check aggregate. `worst_margin` is the smallest `rhs - lhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub regime: Regime,
    pub count: usize,
    pub failed: usize,
    pub worst_margin: f64,
    pub worst_n: usize,
    pub worst_trial: u64,
    pub max_abs_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub status: String,
    pub counts: Counts,
    pub checks: BTreeMap<String, CheckSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

impl Summary {
    pub fn from_records(records: &[CheckReport]) -> Self {
        let mut counts = Counts::default();
        let mut checks: BTreeMap<String, CheckSummary> = BTreeMap::new();
        for r in records {
            counts.total += 1;
            if r.is_asserting() {
                counts.asserting += 1;
                if r.pass {
                    counts.passed += 1;
                } else {
                    counts.failed += 1;
                }
            } else {
                counts.informational += 1;
            }
            let entry = checks.entry(r.check.clone()).or_insert(CheckSummary {
                regime: r.regime,
                count: 0,
                failed: 0,
                worst_margin: f64::INFINITY,
                worst_n: r.n,
                worst_trial: r.trial,
                max_abs_margin: 0.0,
            });
            entry.count += 1;
            if !r.ok() {
                entry.failed += 1;
            }
            // NaN margins are the worst possible
            let worse = if r.margin.is_nan() {
                !entry.worst_margin.is_nan()
            } else {
                r.margin < entry.worst_margin
            };
            if worse {
                entry.worst_margin = r.margin;
                entry.worst_n = r.n;
                entry.worst_trial = r.trial;
            }
            entry.max_abs_margin = entry.max_abs_margin.max(r.margin.abs());
        }
        let status = if counts.failed == 0 { "pass" } else { "fail" };
        Self {
            status: status.into(),
            counts,
            checks,
            config: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.counts.failed == 0
    }
}

/// Records in canonical order: stable sort by `(check, n, trial)`.
pub fn sort_records(records: &mut [CheckReport]) {
    records.sort_by(|a, b| (a.check.as_str(), a.n, a.trial).cmp(&(b.check.as_str(), b.n, b.trial)));
}

/// The parts of the configuration that determine the records.
pub fn config_echo(config: &RunConfig) -> serde_json::Value {
    serde_json::json!({
        "suites": config.suites,
        "dims": config.dims,
        "trials": config.trials,
        "seed": config.seed,
        "quad_size": config.quad_size,
        "points_per_field": config.points_per_field,
        "tolerances": config.tolerances,
    })
}

#[derive(Deserialize)]
struct JsonReport {
    records: Vec<CheckReport>,
}

fn num(v: f64) -> String {
    serde_json::to_string(&v).expect("f64 serializes")
}

pub fn write_json(w: &mut dyn Write, records: &[CheckReport], summary: &Summary) -> anyhow::Result<()> {
    // one record per line keeps large reports diffable
    writeln!(w, "{{\n  \"records\": [")?;
    for (i, r) in records.iter().enumerate() {
        let sep = if i + 1 < records.len() { "," } else { "" };
        writeln!(w, "    {}{sep}", serde_json::to_string(r)?)?;
    }
    writeln!(w, "  ],")?;
    let summary = serde_json::to_string_pretty(summary)?.replace('\n', "\n  ");
    writeln!(w, "  \"summary\": {summary}\n}}")?;
    Ok(())
}

pub fn write_csv(w: &mut dyn Write, records: &[CheckReport]) -> anyhow::Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(CSV_COLUMNS)?;
    for r in records {
        out.write_record([
            r.check.clone(),
            r.n.to_string(),
            r.m.to_string(),
            serde_json::to_string(&r.point)?,
            num(r.lhs),
            num(r.rhs),
            num(r.margin),
            num(r.tol),
            r.regime.as_str().to_string(),
            r.pass.to_string(),
            r.seed.to_string(),
            r.trial.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_report(w: &mut dyn Write, format: Format, records: &[CheckReport], summary: &Summary) -> anyhow::Result<()> {
    match format {
        Format::Json => write_json(w, records, summary),
        Format::Csv => write_csv(w, records),
    }
}

fn parse_float(s: &str) -> anyhow::Result<f64> {
    match s.trim() {
        "null" | "NaN" | "nan" => Ok(f64::NAN),
        t => t.parse().with_context(|| format!("bad number '{t}'")),
    }
}

fn read_csv(text: &str) -> anyhow::Result<Vec<CheckReport>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_COLUMNS {
        bail!("unexpected CSV header: {}", header.join(","));
    }
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let field = |k: usize| row.get(k).unwrap_or("");
        let parse = || -> anyhow::Result<CheckReport> {
            Ok(CheckReport {
                check: field(0).to_string(),
                n: field(1).parse()?,
                m: field(2).parse()?,
                point: serde_json::from_str(field(3))?,
                lhs: parse_float(field(4))?,
                rhs: parse_float(field(5))?,
                margin: parse_float(field(6))?,
                tol: parse_float(field(7))?,
                regime: Regime::parse(field(8)).with_context(|| format!("unknown regime '{}'", field(8)))?,
                pass: field(9).parse()?,
                seed: field(10).parse()?,
                trial: field(11).parse()?,
                relation: Default::default(),
            })
        };
        out.push(parse().with_context(|| format!("CSV line {line}"))?);
    }
    Ok(out)
}

/// Reads the records of a JSON or CSV report.
pub fn read_records(path: &Path) -> anyhow::Result<Vec<CheckReport>> {
    let mut text = String::new();
    std::fs::File::open(path)
        .with_context(|| format!("cannot open report {}", path.display()))?
        .read_to_string(&mut text)?;
    if text.trim_start().starts_with('{') {
        let report: JsonReport =
            serde_json::from_str(&text).with_context(|| format!("invalid JSON report {}", path.display()))?;
        Ok(report.records)
    } else {
        read_csv(&text).with_context(|| format!("invalid CSV report {}", path.display()))
    }
}
