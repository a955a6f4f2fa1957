//! Experiment reports with JSON and CSV serialization.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 6] = [
    "epsilon",
    "raw_value",
    "extrapolated",
    "target",
    "rel_error",
    "converged",
];

/// Least-squares line `y = intercept + slope·x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub residual_rms: f64,
}

pub fn fit_linear(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::domain("a linear fit needs at least two paired points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("abscissae must not all coincide"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    Ok(LinearFit {
        intercept,
        slope,
        residual_rms: (rss / n).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub epsilon: f64,
    pub raw_value: f64,
    pub extrapolated: f64,
    pub target: f64,
    pub rel_error: f64,
    pub converged: bool,
}

/// Results of an ε-grid experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub kind: String,
    pub params: BTreeMap<String, String>,
    pub rows: Vec<ExperimentRow>,
    /// Extrapolated limit (or fitted slope, for slope experiments).
    pub extrapolated: f64,
    pub target: f64,
    pub rel_error: f64,
    pub fit: Option<LinearFit>,
    pub tolerance: Option<f64>,
    pub passed: Option<bool>,
    pub converged: bool,
    pub metrics: BTreeMap<String, f64>,
    pub series: BTreeMap<String, Vec<f64>>,
    pub diagnostics: Vec<String>,
}

impl ExperimentReport {
    pub fn new(kind: &str) -> Self {
        ExperimentReport {
            schema: SCHEMA_VERSION,
            kind: kind.to_string(),
            params: BTreeMap::new(),
            rows: Vec::new(),
            extrapolated: f64::NAN,
            target: f64::NAN,
            rel_error: f64::NAN,
            fit: None,
            tolerance: None,
            passed: None,
            converged: true,
            metrics: BTreeMap::new(),
            series: BTreeMap::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Fills `rows` from raw values and sets the summary against `target`.
    pub fn finish(&mut self, eps: &[f64], raw: &[f64], converged: &[bool], extrapolated: f64, target: f64) {
        self.extrapolated = extrapolated;
        self.target = target;
        self.rel_error = rel_err(extrapolated, target);
        self.converged = converged.iter().all(|c| *c);
        self.rows = eps
            .iter()
            .zip(raw)
            .zip(converged)
            .map(|((&e, &v), &c)| ExperimentRow {
                epsilon: e,
                raw_value: v,
                extrapolated,
                target,
                rel_error: rel_err(v, target),
                converged: c,
            })
            .collect();
    }

    /// Records a pass/fail verdict at relative tolerance `tol`.
    pub fn assert_within(&mut self, tol: f64) -> bool {
        let ok = self.converged && self.rel_error <= tol;
        self.tolerance = Some(tol);
        self.passed = Some(ok);
        ok
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        wr.write_record(CSV_COLUMNS)?;
        for r in &self.rows {
            wr.serialize(r)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }
}

pub fn rel_err(value: f64, target: f64) -> f64 {
    if target == 0.0 {
        value.abs()
    } else {
        ((value - target) / target).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 0.5 * x).collect();
        let f = fit_linear(&xs, &ys).unwrap();
        assert!((f.intercept - 2.0).abs() < 1e-14 && (f.slope + 0.5).abs() < 1e-14);
        assert!(f.residual_rms < 1e-14);
        assert!(fit_linear(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn csv_has_fixed_columns() {
        let mut r = ExperimentReport::new("test");
        r.finish(&[1e-3, 1e-4], &[1.0, 1.1], &[true, true], 1.2, 1.2);
        let csv = r.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(lines.count(), 2);
        let json = r.to_json().unwrap();
        assert!(json.contains("\"schema\": 1"));
    }
}
