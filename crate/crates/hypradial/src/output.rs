//! CSV and JSON encodings of evaluation tables and recovery results.
//!
//! Floats in CSV are written as `{:.16e}`, enough to round-trip any `f64`;
//! JSON uses serde_json's shortest round-trip form. Both are byte-stable.

use std::io::Write;

use serde::Serialize;

use hypradial_core::RecoveryResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalRow {
    pub r: f64,
    pub phi: f64,
    pub branch: &'static str,
    #[serde(rename = "V")]
    pub v: f64,
}

/// Recovery result with the public field set, in output order.
#[derive(Debug, Clone, Serialize)]
pub struct RecoveryRecord {
    pub lambda: f64,
    pub branch: &'static str,
    pub radii_used: u8,
    pub b_bound: Option<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl From<&RecoveryResult> for RecoveryRecord {
    fn from(r: &RecoveryResult) -> Self {
        Self {
            lambda: r.lambda,
            branch: r.branch.name(),
            radii_used: r.radii_used,
            b_bound: r.b_bound,
            residual: r.residual,
            iterations: r.iterations,
        }
    }
}

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_eval<W: Write>(out: W, rows: &[EvalRow], format: Format) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["r", "phi", "branch", "V"])?;
            for row in rows {
                w.write_record([float(row.r), float(row.phi), row.branch.to_owned(), float(row.v)])?;
            }
            w.flush()
        }
        Format::Json => write_json(out, &rows),
    }
}

pub fn write_recovery<W: Write>(out: W, record: &RecoveryRecord, format: Format) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["lambda", "branch", "radii_used", "b_bound", "residual", "iterations"])?;
            w.write_record([
                float(record.lambda),
                record.branch.to_owned(),
                record.radii_used.to_string(),
                record.b_bound.map(float).unwrap_or_default(),
                float(record.residual),
                record.iterations.to_string(),
            ])?;
            w.flush()
        }
        Format::Json => write_json(out, record),
    }
}

fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypradial_core::Branch;

    fn record() -> RecoveryRecord {
        RecoveryRecord::from(&RecoveryResult {
            lambda: 2.0,
            branch: Branch::Oscillatory { b: 1.0 },
            radii_used: 2,
            b_bound: Some(1.25),
            residual: 1e-13,
            iterations: 41,
            second_radius: Some(3.0),
        })
    }

    #[test]
    fn recovery_json_has_exactly_the_public_keys() {
        let mut buf = Vec::new();
        write_recovery(&mut buf, &record(), Format::Json).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 6);
        for key in ["lambda", "branch", "radii_used", "b_bound", "residual", "iterations"] {
            assert!(keys.contains(&key), "missing {key}");
        }
        assert_eq!(value["branch"], "oscillatory");
    }

    #[test]
    fn eval_csv_layout() {
        let rows = [EvalRow { r: 1.0, phi: 0.5, branch: "oscillatory", v: 0.75 }];
        let mut buf = Vec::new();
        write_eval(&mut buf, &rows, Format::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "r,phi,branch,V\n1.0000000000000000e0,5.0000000000000000e-1,oscillatory,7.5000000000000000e-1\n");
    }

    #[test]
    fn float_round_trips() {
        for x in [0.716_030_530_791_531_4, -1.3e-300, 12_345.678_901_234_5] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
    }
}
