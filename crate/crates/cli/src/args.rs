use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;

/// Sharp constants for critical Sobolev embeddings.
#[derive(Debug, Clone, Parser)]
#[command(name = "sobconst", version, about)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// MPFR mantissa bits for inexact values and decimal renderings.
    #[arg(long, env = "SOBCONST_PRECISION", default_value_t = 113, global = true,
          value_parser = clap::value_parser!(u32).range(24..=4096))]
    pub precision: u32,

    /// Relative tolerance of the adaptive quadrature.
    #[arg(long, default_value_t = 1e-10, global = true)]
    pub rel_tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Tabulate closed-form constants.
    Constants(ConstantsArgs),
    /// Run an identity or inequality verification suite.
    Verify(VerifyArgs),
    /// Run an ε-sequence experiment on the extremizing family.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstantScope {
    Gamma,
    Ell,
    Lambda,
    Sharp,
    Adams,
    Moser,
    Bmo,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    pub scope: ConstantScope,
    #[arg(long = "N")]
    pub dim: u32,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Riesz order, integer or fraction such as 3/2.
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    pub alpha: Option<Rational>,
    /// Power exponent of λ, integer or fraction.
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    pub s: Option<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Oracle,
    Divk,
    GammaIdentities,
    #[value(name = "ell-2m")]
    Ell2m,
    Pointwise,
    Fundamental,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub suite: Suite,
    #[arg(long = "N", value_delimiter = ',')]
    pub dims: Vec<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_parser = parse_rational)]
    pub alpha: Option<Rational>,
    #[arg(long = "max-N", default_value_t = 8)]
    pub max_dim: u32,
    #[arg(long = "max-m", default_value_t = 5)]
    pub max_m: u32,
    /// Largest m in the λ part of the oracle suite.
    #[arg(long = "max-lambda-m", default_value_t = 4)]
    pub max_lambda_m: u32,
    /// Seed of the random bump suite.
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
    /// Number of random bumps.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Sample radii per bump in the pointwise suite.
    #[arg(long, default_value_t = 6)]
    pub radii: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    Ratio,
    WeakDelta,
    Seminorm,
    Moser,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtrapolationArg {
    Separate,
    Linear,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    pub kind: ExperimentKind,
    #[arg(long = "N")]
    pub dim: u32,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    /// Exponent of the gradient seminorm; omit with --dm.
    #[arg(long)]
    pub p: Option<f64>,
    /// Measure the D^m L² seminorm instead of the |∇^m| L^p one.
    #[arg(long)]
    pub dm: bool,
    #[arg(long = "eps", value_delimiter = ',')]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub beta_scale: f64,
    #[arg(long, value_enum, default_value_t = ExtrapolationArg::Separate)]
    pub extrapolation: ExtrapolationArg,
    /// Fail (exit 1) unless the relative error is within this tolerance.
    #[arg(long)]
    pub assert: Option<f64>,
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    if let Ok(q) = s.parse::<Rational>() {
        return Ok(q);
    }
    s.parse::<f64>()
        .ok()
        .and_then(Rational::from_f64)
        .ok_or_else(|| format!("`{s}` is not a rational number"))
}
