use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sumprod::numeric::fmt_f64;
use sumprod::BoundReport;

pub const COLUMNS: [&str; 9] = ["suite", "claim_ref", "kind", "lhs", "main_term", "error", "rhs", "ratio", "verdict"];

#[derive(Serialize)]
pub struct Metadata {
    pub version: &'static str,
    pub prng: &'static str,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

#[derive(Serialize)]
pub struct Report {
    pub metadata: Metadata,
    pub rows: Vec<BoundReport>,
}

impl Report {
    /// True iff every ASSERT row holds.
    pub fn passed(&self) -> bool {
        sumprod::report::all_passed(&self.rows)
    }
}

fn record(r: &BoundReport) -> [String; 9] {
    [
        r.suite.clone(),
        r.claim_ref.clone(),
        r.kind.to_string(),
        r.lhs.to_string(),
        r.main_term.to_string(),
        r.error.to_string(),
        r.rhs.to_string(),
        r.ratio.map(fmt_f64).unwrap_or_default(),
        r.verdict.map(|v| v.to_string()).unwrap_or_default(),
    ]
}

pub fn csv_bytes(report: &Report) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    writeln!(out, "# version={}", report.metadata.version)?;
    writeln!(out, "# prng={}", report.metadata.prng)?;
    writeln!(out, "# config={}", report.metadata.config)?;
    if let Some(t) = report.metadata.timestamp {
        writeln!(out, "# timestamp={t}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in &report.rows {
        w.write_record(record(r))?;
    }
    Ok(w.into_inner().context("flushing csv")?)
}

pub fn json_bytes(report: &Report) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(report)?;
    v.push(b'\n');
    Ok(v)
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(bytes)?;
            Ok(s.flush()?)
        }
    }
}
