//! Report rows and their CSV and JSON encodings.

use std::cmp::Ordering;
use std::io::Write;

use anyhow::Result;
use emergent_irq::AxiomReport;
use serde::Serialize;

use crate::config::Format;

/// One checked identity or limit. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub experiment: String,
    pub carrier: String,
    pub identity: String,
    /// Level, or the largest stopping level for limits.
    pub k: Option<i64>,
    pub samples: usize,
    pub max_residual: f64,
    pub rate: Option<f64>,
    pub passed: bool,
}

impl Row {
    pub fn from_report(experiment: &str, carrier: &str, r: &AxiomReport) -> Self {
        Row {
            experiment: experiment.to_string(),
            carrier: carrier.to_string(),
            identity: r.name.clone(),
            k: None,
            samples: r.samples,
            max_residual: r.max_residual,
            rate: None,
            passed: r.passed,
        }
    }
}

/// Sort by identity name, then level. The sort is stable, so rows that tie
/// keep the order in which they were produced.
pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| match a.identity.cmp(&b.identity) {
        Ordering::Equal => a.k.cmp(&b.k),
        o => o,
    });
}

pub fn write_rows<W: Write>(rows: &[Row], format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            if rows.is_empty() {
                w.write_record(["experiment", "carrier", "identity", "k", "samples", "max_residual", "rate", "passed"])?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
