//! Constant tables.

use std::collections::BTreeMap;

use rug::Rational;
use serde::Serialize;
use sobconst::constants::{
    adams_beta0, beta_tilde, bmo_c0, ell_constant, lambda_constant, moser_alpha0, riesz_gamma, sharp_c,
};
use sobconst::report::SCHEMA_VERSION;
use sobconst::{ExactReal, Result};

use crate::args::{ConstantScope, ConstantsArgs};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantRow {
    pub name: String,
    pub params: BTreeMap<String, String>,
    /// Stable grammar, see `ExactReal`'s `Display`.
    pub exact: String,
    pub pretty: String,
    pub decimal: String,
    pub value: f64,
    pub is_exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantTable {
    pub schema: u32,
    pub scope: String,
    pub rows: Vec<ConstantRow>,
}

fn row(name: &str, params: &[(&str, String)], v: &ExactReal, precision: u32) -> ConstantRow {
    ConstantRow {
        name: name.to_string(),
        params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        exact: v.to_string(),
        pretty: v.pretty(),
        decimal: v.to_decimal(precision),
        value: v.to_f64(),
        is_exact: v.is_exact(),
    }
}

pub fn table(args: &ConstantsArgs, precision: u32) -> Result<ConstantTable> {
    let n = args.dim;
    if n < 2 {
        return Err(sobconst::Error::Domain(format!("dimension {n} < 2")));
    }
    let ns = ("N", n.to_string());
    let mut rows = Vec::new();
    let orders = |given: Option<u32>, hi: u32| -> Vec<u32> {
        match given {
            Some(v) => vec![v],
            None => (1..=hi).collect(),
        }
    };
    let scope = match args.scope {
        ConstantScope::Gamma => {
            let alphas: Vec<Rational> = match &args.alpha {
                Some(a) => vec![a.clone()],
                None => (1..n).map(Rational::from).collect(),
            };
            for a in alphas {
                let v = riesz_gamma(n, &a)?;
                rows.push(row("gamma", &[ns.clone(), ("alpha", a.to_string())], &v, precision));
            }
            "gamma"
        }
        ConstantScope::Ell => {
            for m in orders(args.m, n) {
                let v = ell_constant(n, m)?;
                rows.push(row("ell", &[ns.clone(), ("m", m.to_string())], &v, precision));
            }
            "ell"
        }
        ConstantScope::Lambda => {
            let s = args
                .s
                .clone()
                .ok_or_else(|| sobconst::Error::Domain("lambda needs --s".into()))?;
            for m in orders(args.m, 4) {
                let v = lambda_constant(n, &s, m)?;
                rows.push(row(
                    "lambda",
                    &[ns.clone(), ("s", s.to_string()), ("m", m.to_string())],
                    &v,
                    precision,
                ));
            }
            "lambda"
        }
        ConstantScope::Sharp => {
            for k in orders(args.k, n.saturating_sub(1)) {
                let v = sharp_c(n, k)?;
                rows.push(row("sharp_c", &[ns.clone(), ("k", k.to_string())], &v, precision));
            }
            "sharp"
        }
        ConstantScope::Adams => {
            for m in orders(args.m, n.saturating_sub(1)) {
                let p = [ns.clone(), ("m", m.to_string())];
                rows.push(row("beta0", &p, &adams_beta0(n, m)?, precision));
                rows.push(row("beta_tilde", &p, &beta_tilde(n, m)?, precision));
            }
            "adams"
        }
        ConstantScope::Moser => {
            rows.push(row("alpha0", &[ns], &moser_alpha0(n)?, precision));
            "moser"
        }
        ConstantScope::Bmo => {
            rows.push(row("c0", &[ns], &bmo_c0(n)?, precision));
            "bmo"
        }
    };
    Ok(ConstantTable {
        schema: SCHEMA_VERSION,
        scope: scope.to_string(),
        rows,
    })
}
