//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::Command;
use std::time::Instant;

use sobconst::extremizer::{
    moser_blowup, ratio_experiment, seminorm_slope, weak_delta_coefficient, Extrapolation, SeminormKind,
    DEFAULT_EPS_GRID, MOSER_EPS_GRID,
};
use sobconst::quadrature::QuadratureConfig;
use sobconst_cli::verify::{self, VerifyReport};

type Verdict = Result<(bool, String), String>;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Verdict + 'a>);

const SEED: u64 = 20240601;

fn suite_summary(r: &VerifyReport) -> (bool, String) {
    (r.passed, format!("{}/{} checks", r.checks.len() - r.failures(), r.checks.len()))
}

fn only(r: VerifyReport, name: &str) -> VerifyReport {
    let checks: Vec<_> = r.checks.into_iter().filter(|c| c.name == name).collect();
    VerifyReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
        ..r
    }
}

fn c1() -> Verdict {
    let r = verify::oracle(8, 5, 4).map_err(|e| e.to_string())?;
    Ok(suite_summary(&r))
}

fn c2() -> Verdict {
    let r = verify::ell_2m(12).map_err(|e| e.to_string())?;
    Ok(suite_summary(&r))
}

fn c3() -> Verdict {
    let r = verify::gamma_identities(None).map_err(|e| e.to_string())?;
    Ok(suite_summary(&r))
}

fn c4() -> Verdict {
    let r = only(verify::divk_grid().map_err(|e| e.to_string())?, "divk_power");
    Ok(suite_summary(&r))
}

fn c5(cfg: &QuadratureConfig) -> Verdict {
    let sym = only(verify::divk_grid().map_err(|e| e.to_string())?, "divk_log");
    let mut ok = sym.passed;
    let mut msg = format!("symbolic {}", suite_summary(&sym).1);
    for (n, k) in [(2, 1), (4, 2), (6, 2)] {
        let mut r = weak_delta_coefficient(n, k, &DEFAULT_EPS_GRID, Extrapolation::Separate, cfg)
            .map_err(|e| e.to_string())?;
        ok &= r.assert_within(0.01);
        msg += &format!("; ({n},{k}) rel {:.1e}", r.rel_error);
    }
    Ok((ok, msg))
}

fn c6(cfg: &QuadratureConfig) -> Verdict {
    let mut ok = true;
    let mut msg = Vec::new();
    for (n, k) in [(3, 1), (4, 2), (5, 1), (5, 3), (6, 2), (6, 4)] {
        let mut r = ratio_experiment(n, k, &DEFAULT_EPS_GRID, Extrapolation::Separate, cfg)
            .map_err(|e| e.to_string())?;
        ok &= r.assert_within(0.005);
        msg.push(format!("({n},{k}) {:.1e}", r.rel_error));
    }
    Ok((ok, format!("rel errors {}", msg.join(", "))))
}

fn c7(cfg: &QuadratureConfig) -> Verdict {
    let cases = [
        (4, SeminormKind::GradM { m: 2, p: 2.0 }),
        (3, SeminormKind::GradM { m: 1, p: 3.0 }),
        (5, SeminormKind::GradM { m: 2, p: 2.5 }),
        (3, SeminormKind::GradM { m: 3, p: 1.0 }),
        (2, SeminormKind::DmL2 { m: 1 }),
        (4, SeminormKind::DmL2 { m: 2 }),
    ];
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for (n, kind) in cases {
        let mut r = seminorm_slope(n, kind, &DEFAULT_EPS_GRID, cfg).map_err(|e| e.to_string())?;
        ok &= r.assert_within(0.01);
        worst = worst.max(r.rel_error);
    }
    Ok((ok, format!("{} slopes, worst rel error {worst:.1e}", cases.len())))
}

fn c8(cfg: &QuadratureConfig) -> Verdict {
    let up = moser_blowup(4, 2, 1.1, &MOSER_EPS_GRID, cfg).map_err(|e| e.to_string())?;
    let down = moser_blowup(4, 2, 0.5, &MOSER_EPS_GRID, cfg).map_err(|e| e.to_string())?;
    let ok = up.passed == Some(true) && down.passed == Some(true) && up.converged && down.converged;
    Ok((
        ok,
        format!(
            "s=1.1 full slope {:+.3}; s=0.5 annulus slope {:+.3}; bound violations {}",
            up.metrics["full_log_slope"],
            down.metrics["annulus_log_slope"],
            up.metrics["bound_violations"] + down.metrics["bound_violations"]
        ),
    ))
}

fn c9(cfg: &QuadratureConfig) -> Verdict {
    let r = verify::pointwise(&[3, 4, 6], SEED, 50, 6, cfg).map_err(|e| e.to_string())?;
    let min = r
        .checks
        .iter()
        .filter_map(|c| c.detail["min_margin"].as_f64())
        .fold(f64::INFINITY, f64::min);
    let (ok, s) = suite_summary(&r);
    Ok((ok, format!("{s} (N, m, k) combinations over 50 bumps, min margin {min:.2e}")))
}

fn c10(cfg: &QuadratureConfig) -> Verdict {
    let r = verify::fundamental(&[2, 4], SEED, 5, cfg).map_err(|e| e.to_string())?;
    let worst = r
        .checks
        .iter()
        .filter_map(|c| c.detail["rel_error"].as_f64())
        .fold(0.0, f64::max);
    let (ok, s) = suite_summary(&r);
    Ok((ok, format!("{s}, worst rel error {worst:.1e}")))
}

fn c11() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_sobconst");
    let configs: [&[&str]; 4] = [
        &["constants", "sharp", "--N", "6"],
        &["experiment", "ratio", "--N", "4", "--k", "2"],
        &["experiment", "moser", "--N", "4", "--m", "2", "--beta-scale", "1.1"],
        &["verify", "pointwise", "--N", "4", "--count", "3", "--seed", "9"],
    ];
    for args in configs {
        let run = || {
            Command::new(bin)
                .args(args)
                .output()
                .map_err(|e| e.to_string())
                .map(|o| o.stdout)
        };
        let (a, b) = (run()?, run()?);
        if a != b || a.is_empty() {
            return Ok((false, format!("outputs differ for {}", args.join(" "))));
        }
    }
    Ok((true, format!("{} configurations byte-identical across runs", configs.len())))
}

fn main() {
    let cfg = QuadratureConfig::default();
    let criteria: Vec<Criterion> = vec![
        ("ell/lambda formulas equal the symbolic oracle", Box::new(c1)),
        ("ell_{2m}^m closed form, m <= 12", Box::new(c2)),
        ("gamma reflection, omega/gamma(2), beta-tilde coincidences", Box::new(c3)),
        ("div_k power identity residuals vanish", Box::new(c4)),
        ("div_k log identity and weak delta coefficient", Box::new(move || c5(&cfg))),
        ("ratio experiment reaches the sharp constant", Box::new(move || c6(&cfg))),
        ("seminorm slopes", Box::new(move || c7(&cfg))),
        ("exponential blow-up direction", Box::new(move || c8(&cfg))),
        ("pointwise potential inequalities", Box::new(move || c9(&cfg))),
        ("log fundamental solution recovers v(0)", Box::new(move || c10(&cfg))),
        ("deterministic JSON output", Box::new(c11)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, msg) = match f() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {msg} [{:.1}s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
