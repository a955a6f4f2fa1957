//! Experiment dispatch.

use sobconst::extremizer::{
    moser_blowup, ratio_experiment, seminorm_slope, weak_delta_coefficient, Extrapolation, SeminormKind,
    DEFAULT_EPS_GRID, MOSER_EPS_GRID,
};
use sobconst::quadrature::QuadratureConfig;
use sobconst::{Error, ExperimentReport, Result};

use crate::args::{ExperimentArgs, ExperimentKind, ExtrapolationArg};

fn need(v: Option<u32>, flag: &str) -> Result<u32> {
    v.ok_or_else(|| Error::Domain(format!("this experiment needs --{flag}")))
}

pub fn run(args: &ExperimentArgs, cfg: &QuadratureConfig) -> Result<ExperimentReport> {
    let method = match args.extrapolation {
        ExtrapolationArg::Separate => Extrapolation::Separate,
        ExtrapolationArg::Linear => Extrapolation::Linear,
    };
    let grid = |default: &[f64]| if args.eps.is_empty() { default.to_vec() } else { args.eps.clone() };
    let n = args.dim;
    let mut rep = match args.kind {
        ExperimentKind::Ratio => ratio_experiment(n, need(args.k, "k")?, &grid(&DEFAULT_EPS_GRID), method, cfg)?,
        ExperimentKind::WeakDelta => {
            weak_delta_coefficient(n, need(args.k, "k")?, &grid(&DEFAULT_EPS_GRID), method, cfg)?
        }
        ExperimentKind::Seminorm => {
            let m = need(args.m, "m")?;
            let kind = if args.dm {
                SeminormKind::DmL2 { m }
            } else {
                SeminormKind::GradM {
                    m,
                    p: args.p.unwrap_or(n as f64 / m as f64),
                }
            };
            seminorm_slope(n, kind, &grid(&DEFAULT_EPS_GRID), cfg)?
        }
        ExperimentKind::Moser => moser_blowup(n, need(args.m, "m")?, args.beta_scale, &grid(&MOSER_EPS_GRID), cfg)?,
    };
    if let Some(tol) = args.assert {
        if args.kind == ExperimentKind::Moser {
            rep.tolerance = Some(tol);
        } else {
            rep.assert_within(tol);
        }
    }
    Ok(rep)
}
