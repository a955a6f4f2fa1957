//! Verification suites. Every suite returns one [`CheckResult`] per check.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;
use serde_json::json;
use sobconst::bump::TestBump;
use sobconst::calculus::{ell_oracle, lambda_oracle, verify_divk_identity_log, verify_divk_identity_power};
use sobconst::constants::{
    adams_beta0, beta_tilde, ell_rational, lambda_rational, moser_alpha0, riesz_gamma, sphere_area,
    verify_gamma_reflection,
};
use sobconst::potentials::{
    check_endpoint_pointwise, check_intermediate_pointwise, default_sample_radii, log_fundamental_check,
    POINTWISE_TOLERANCE,
};
use sobconst::quadrature::QuadratureConfig;
use sobconst::report::SCHEMA_VERSION;
use sobconst::{ExactReal, Result};

use crate::args::{Suite, VerifyArgs};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub passed: bool,
    pub detail: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    fn new(suite: &str, checks: Vec<CheckResult>) -> Self {
        VerifyReport {
            schema: SCHEMA_VERSION,
            suite: suite.to_string(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

fn check(name: &str, params: &[(&str, String)], passed: bool, detail: serde_json::Value) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        passed,
        detail,
    }
}

pub fn run(args: &VerifyArgs, cfg: &QuadratureConfig) -> Result<VerifyReport> {
    match args.suite {
        Suite::Oracle => oracle(args.max_dim, args.max_m, args.max_lambda_m),
        Suite::Divk => match (args.dims.first(), args.k, &args.alpha) {
            (Some(&n), Some(k), Some(a)) => divk_single(n, k, a),
            _ => divk_grid(),
        },
        Suite::GammaIdentities => gamma_identities(args.dims.first().copied()),
        Suite::Ell2m => ell_2m(12),
        Suite::Pointwise => {
            let dims = if args.dims.is_empty() { vec![3, 4, 6] } else { args.dims.clone() };
            pointwise(&dims, args.seed, args.count, args.radii, cfg)
        }
        Suite::Fundamental => {
            let dims = if args.dims.is_empty() { vec![2, 4] } else { args.dims.clone() };
            fundamental(&dims, args.seed, args.count, cfg)
        }
    }
}

/// ℓ formula against the symbolic oracle for `N ≤ max_dim`, `m ≤ min(N, max_m)`,
/// and λ for `m ≤ max_lambda_m` at `s ∈ {m−N, −2, −1/2, 1/2, 3}`.
pub fn oracle(max_dim: u32, max_m: u32, max_lambda_m: u32) -> Result<VerifyReport> {
    let mut jobs = Vec::new();
    for n in 2..=max_dim {
        for m in 1..=n.min(max_m) {
            jobs.push((n, m, None));
        }
        for m in 1..=max_lambda_m {
            for s in [
                Rational::from(m as i64 - n as i64),
                Rational::from(-2),
                Rational::from((-1, 2)),
                Rational::from((1, 2)),
                Rational::from(3),
            ] {
                jobs.push((n, m, Some(s)));
            }
        }
    }
    let checks = jobs
        .par_iter()
        .map(|(n, m, s)| {
            let (n, m) = (*n, *m);
            Ok(match s {
                None => {
                    let f = ell_rational(n, m)?;
                    let o = ell_oracle(n, m)?;
                    check(
                        "ell",
                        &[("N", n.to_string()), ("m", m.to_string())],
                        f == o,
                        json!({"formula": f.to_string(), "oracle": o.to_string()}),
                    )
                }
                Some(s) => {
                    let f = lambda_rational(n, s, m)?;
                    let o = lambda_oracle(n, s, m)?;
                    check(
                        "lambda",
                        &[("N", n.to_string()), ("m", m.to_string()), ("s", s.to_string())],
                        f == o,
                        json!({"formula": f.to_string(), "oracle": o.to_string()}),
                    )
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::new("oracle", checks))
}

fn divk_single(n: u32, k: u32, alpha: &Rational) -> Result<VerifyReport> {
    let ok = verify_divk_identity_power(n, k, alpha)?;
    let c = check(
        "divk_power",
        &[("N", n.to_string()), ("k", k.to_string()), ("alpha", alpha.to_string())],
        ok,
        json!({"residual_zero": ok}),
    );
    Ok(VerifyReport::new("divk", vec![c]))
}

/// Power identity for `N ∈ 3..=6`, `k ∈ 1..=3`, `α ∈ {k+1/2, k+1, k+2, N}`
/// with `k < α ≤ N+1`, and the log identity for `N ∈ 2..=6`, `k ∈ 1..=4`.
pub fn divk_grid() -> Result<VerifyReport> {
    let mut jobs: Vec<(u32, u32, Option<Rational>)> = Vec::new();
    for n in 3..=6u32 {
        for k in 1..=3u32 {
            let mut alphas = vec![
                Rational::from((2 * k as i64 + 1, 2)),
                Rational::from(k + 1),
                Rational::from(k + 2),
                Rational::from(n),
            ];
            alphas.retain(|a| *a > k && *a <= n + 1);
            alphas.dedup();
            jobs.extend(alphas.into_iter().map(|a| (n, k, Some(a))));
        }
    }
    for n in 2..=6u32 {
        for k in 1..=4u32 {
            jobs.push((n, k, None));
        }
    }
    let checks = jobs
        .par_iter()
        .map(|(n, k, a)| {
            let (n, k) = (*n, *k);
            Ok(match a {
                Some(a) => {
                    let ok = verify_divk_identity_power(n, k, a)?;
                    check(
                        "divk_power",
                        &[("N", n.to_string()), ("k", k.to_string()), ("alpha", a.to_string())],
                        ok,
                        json!({"residual_zero": ok}),
                    )
                }
                None => {
                    let ok = verify_divk_identity_log(n, k)?;
                    check(
                        "divk_log",
                        &[("N", n.to_string()), ("k", k.to_string())],
                        ok,
                        json!({"residual_zero": ok}),
                    )
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::new("divk", checks))
}

fn exact_check(name: &str, params: &[(&str, String)], lhs: &ExactReal, rhs: &ExactReal) -> CheckResult {
    let eq = lhs.exact_eq(rhs);
    check(
        name,
        params,
        eq == Some(true),
        json!({"lhs": lhs.to_string(), "rhs": rhs.to_string(), "exact": eq.is_some()}),
    )
}

fn gamma_identities_for(n: u32, checks: &mut Vec<CheckResult>) -> Result<()> {
    let ns = ("N", n.to_string());
    for a in 1..n {
        let r = verify_gamma_reflection(n, &Rational::from(a))?;
        checks.push(check(
            "gamma_reflection",
            &[ns.clone(), ("alpha", a.to_string())],
            r.holds && r.exact,
            json!({"exact": r.exact}),
        ));
    }
    if n >= 3 {
        let lhs = sphere_area(n)?.scale(n - 2);
        let rhs = riesz_gamma(n, &Rational::from(2))?;
        checks.push(exact_check("omega_gamma2", std::slice::from_ref(&ns), &lhs, &rhs));
    }
    checks.push(exact_check("beta_tilde_1_is_alpha0", std::slice::from_ref(&ns), &beta_tilde(n, 1)?, &moser_alpha0(n)?));
    if n % 2 == 0 {
        let m = n / 2;
        checks.push(exact_check(
            "beta_tilde_is_beta0_at_half",
            &[ns, ("m", m.to_string())],
            &beta_tilde(n, m)?,
            &adams_beta0(n, m)?,
        ));
    }
    Ok(())
}

/// Reflection, `ω_{N−1}(N−2) = γ(2)` and the two `β̃_0` coincidences. Without
/// `N` the ranges are `N ∈ 2..=10` and `m ∈ 1..=6` for the `N = 2m` case.
pub fn gamma_identities(dim: Option<u32>) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    match dim {
        Some(n) => gamma_identities_for(n, &mut checks)?,
        None => {
            for n in 2..=10 {
                gamma_identities_for(n, &mut checks)?;
            }
            // N = 12 completes m ≤ 6 for the N = 2m coincidence.
            checks.push(exact_check(
                "beta_tilde_is_beta0_at_half",
                &[("N", "12".into()), ("m", "6".into())],
                &beta_tilde(12, 6)?,
                &adams_beta0(12, 6)?,
            ));
        }
    }
    Ok(VerifyReport::new("gamma-identities", checks))
}

/// `ℓ_{2m}^m = 2^{2(m−1)}((m−1)!)²` for `m ≤ max_m`.
pub fn ell_2m(max_m: u32) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let mut fact = rug::Integer::from(1);
    for m in 1..=max_m {
        if m > 1 {
            fact *= m - 1;
        }
        let expect = Rational::from(rug::Integer::from(1) << (2 * (m - 1))) * Rational::from(fact.clone() * &fact);
        let got = ell_rational(2 * m, m)?;
        checks.push(check(
            "ell_2m",
            &[("m", m.to_string())],
            got == expect,
            json!({"formula": got.to_string(), "closed_form": expect.to_string()}),
        ));
    }
    Ok(VerifyReport::new("ell-2m", checks))
}

/// `(m, k)` pairs with `1 ≤ k ≤ m < N` and `m − k` even.
pub fn even_gap_pairs(n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for m in 1..n {
        for k in (1..=m).rev().step_by(2) {
            out.push((m, k));
        }
    }
    out
}

pub fn pointwise(dims: &[u32], seed: u64, count: usize, radii: usize, cfg: &QuadratureConfig) -> Result<VerifyReport> {
    let order = dims.iter().copied().max().unwrap_or(2) + 2;
    let bumps = TestBump::random_suite(seed, count, order);
    let jobs: Vec<(u32, u32, u32)> = dims
        .iter()
        .flat_map(|&n| even_gap_pairs(n).into_iter().map(move |(m, k)| (n, m, k)))
        .collect();
    let checks = jobs
        .par_iter()
        .map(|&(n, m, k)| {
            let margins = bumps
                .par_iter()
                .map(|b| {
                    let u = b.profile();
                    let r = default_sample_radii(b.support_radius(), radii);
                    let rep = if m == k {
                        check_endpoint_pointwise(&u, m, n, &r, cfg)?
                    } else {
                        check_intermediate_pointwise(&u, m, k, n, &r, cfg)?
                    };
                    Ok(rep.min_margin)
                })
                .collect::<Result<Vec<f64>>>()?;
            let (worst, min_margin) = margins
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
            let violations = margins.iter().filter(|&&v| v < -POINTWISE_TOLERANCE).count();
            Ok(check(
                if m == k { "pointwise_endpoint" } else { "pointwise_intermediate" },
                &[("N", n.to_string()), ("m", m.to_string()), ("k", k.to_string())],
                violations == 0,
                json!({
                    "bumps": bumps.len(),
                    "radii_per_bump": radii,
                    "seed": seed,
                    "min_margin": min_margin,
                    "worst_bump": worst,
                    "violations": violations,
                    "tolerance": POINTWISE_TOLERANCE,
                }),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::new("pointwise", checks))
}

/// Relative tolerance of the fundamental-solution check.
pub const FUNDAMENTAL_TOLERANCE: f64 = 1e-8;

pub fn fundamental(dims: &[u32], seed: u64, count: usize, cfg: &QuadratureConfig) -> Result<VerifyReport> {
    let order = dims.iter().copied().max().unwrap_or(2) + 2;
    let bumps = TestBump::random_suite(seed, count, order);
    let jobs: Vec<(u32, usize)> = dims.iter().flat_map(|&n| (0..bumps.len()).map(move |i| (n, i))).collect();
    let checks = jobs
        .par_iter()
        .map(|&(n, i)| {
            let rep = log_fundamental_check(n, &bumps[i].profile(), cfg)?;
            Ok(check(
                "log_fundamental",
                &[("N", n.to_string()), ("bump", i.to_string())],
                rep.converged && rep.rel_error <= FUNDAMENTAL_TOLERANCE,
                json!({
                    "integral": rep.integral,
                    "value_at_origin": rep.value_at_origin,
                    "rel_error": rep.rel_error,
                    "converged": rep.converged,
                }),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::new("fundamental", checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_gap_pairs_for_six() {
        let p = even_gap_pairs(6);
        assert_eq!(p.len(), 9);
        assert!(p.contains(&(5, 1)) && p.contains(&(4, 2)) && !p.contains(&(4, 1)));
        assert_eq!(even_gap_pairs(3), vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn ell_2m_small() {
        assert!(ell_2m(6).unwrap().passed);
    }
}
