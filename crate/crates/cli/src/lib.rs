//! Front end of the `sobconst` binary. [`run`] turns parsed arguments into
//! rendered output and an exit status, without touching the process.

pub mod args;
pub mod constants;
pub mod experiment;
pub mod verify;

use std::collections::BTreeMap;

use serde::Serialize;
use sobconst::exact::set_default_precision;
use sobconst::quadrature::QuadratureConfig;
use sobconst::{Error, ExperimentReport};

pub use args::{Cli, Command, Format};
use constants::ConstantTable;
use verify::VerifyReport;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    CheckFailed = 1,
    Usage = 2,
    NonConvergence = 3,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub output: String,
    pub status: Status,
}

pub fn status_of(err: &Error) -> Status {
    match err {
        Error::Domain(_) | Error::Limit(_) => Status::Usage,
        Error::NaN { .. } | Error::NonConvergence { .. } | Error::Saturation(_) => Status::NonConvergence,
        Error::Io(_) => Status::CheckFailed,
    }
}

fn params_string(p: &BTreeMap<String, String>) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn json<T: Serialize>(v: &T) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn csv_from_records(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn render_constants(t: &ConstantTable, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => json(t),
        Format::Csv => csv_from_records(
            &["name", "params", "exact", "pretty", "decimal", "value", "is_exact"],
            t.rows
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        params_string(&r.params),
                        r.exact.clone(),
                        r.pretty.clone(),
                        r.decimal.clone(),
                        format!("{:e}", r.value),
                        r.is_exact.to_string(),
                    ]
                })
                .collect(),
        ),
        Format::Pretty => Ok(t
            .rows
            .iter()
            .map(|r| format!("{}({}) = {}  ≈ {}\n", r.name, params_string(&r.params), r.pretty, r.decimal))
            .collect()),
    }
}

fn render_verify(v: &VerifyReport, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => json(v),
        Format::Csv => csv_from_records(
            &["name", "params", "passed", "detail"],
            v.checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        params_string(&c.params),
                        c.passed.to_string(),
                        c.detail.to_string(),
                    ]
                })
                .collect(),
        ),
        Format::Pretty => {
            let mut s: String = v
                .checks
                .iter()
                .map(|c| {
                    let tag = if c.passed { "PASS" } else { "FAIL" };
                    format!("{tag} {} {}\n", c.name, params_string(&c.params))
                })
                .collect();
            s.push_str(&format!(
                "{}: {}/{} checks passed\n",
                v.suite,
                v.checks.len() - v.failures(),
                v.checks.len()
            ));
            Ok(s)
        }
    }
}

fn render_experiment(r: &ExperimentReport, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => json(r),
        Format::Csv => r.to_csv(),
        Format::Pretty => {
            let mut s = format!("{} {}\n", r.kind, params_string(&r.params));
            for row in &r.rows {
                s.push_str(&format!(
                    "  eps={:e}  value={:.12e}  converged={}\n",
                    row.epsilon, row.raw_value, row.converged
                ));
            }
            s.push_str(&format!(
                "  extrapolated={:.12e}  target={:.12e}  rel_error={:.3e}\n",
                r.extrapolated, r.target, r.rel_error
            ));
            for (k, v) in &r.metrics {
                s.push_str(&format!("  {k}={v:.12e}\n"));
            }
            for d in &r.diagnostics {
                s.push_str(&format!("  note: {d}\n"));
            }
            if let Some(p) = r.passed {
                s.push_str(if p { "  PASS\n" } else { "  FAIL\n" });
            }
            Ok(s)
        }
    }
}

pub fn quadrature_config(cli: &Cli) -> Result<QuadratureConfig, Error> {
    let cfg = QuadratureConfig {
        precision_bits: cli.precision,
        ..QuadratureConfig::default()
    }
    .with_rel_tol(cli.rel_tol);
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    set_default_precision(cli.precision);
    let cfg = quadrature_config(cli)?;
    match &cli.command {
        Command::Constants(a) => {
            let t = constants::table(a, cli.precision)?;
            Ok(Outcome {
                output: render_constants(&t, cli.format)?,
                status: Status::Pass,
            })
        }
        Command::Verify(a) => {
            let v = verify::run(a, &cfg)?;
            Ok(Outcome {
                output: render_verify(&v, cli.format)?,
                status: if v.passed { Status::Pass } else { Status::CheckFailed },
            })
        }
        Command::Experiment(a) => {
            let r = experiment::run(a, &cfg)?;
            let status = if a.assert.is_some() && r.passed != Some(true) {
                Status::CheckFailed
            } else if !r.converged {
                Status::NonConvergence
            } else {
                Status::Pass
            };
            Ok(Outcome {
                output: render_experiment(&r, cli.format)?,
                status,
            })
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    execute(cli).unwrap_or_else(|e| Outcome {
        output: format!("error: {e}\n"),
        status: status_of(&e),
    })
}
