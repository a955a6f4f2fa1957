use rug::Rational;
use sobconst::calculus::{ell_oracle, lambda_oracle, verify_divk_identity_log, verify_divk_identity_power};
use sobconst::constants::{ell_rational, lambda_rational};

#[test]
fn ell_formula_matches_oracle_on_grid() {
    for n in 2..=8u32 {
        for m in 1..=n.min(5) {
            assert_eq!(ell_rational(n, m).unwrap(), ell_oracle(n, m).unwrap(), "N={n} m={m}");
        }
    }
}

#[test]
fn lambda_formula_matches_oracle_on_grid() {
    for n in 2..=8u32 {
        for m in 1..=4u32 {
            let samples = [
                Rational::from(m as i64 - n as i64),
                Rational::from(-2),
                Rational::from((-1, 2)),
                Rational::from((1, 2)),
                Rational::from(3),
            ];
            for s in &samples {
                assert_eq!(
                    lambda_rational(n, s, m).unwrap(),
                    lambda_oracle(n, s, m).unwrap(),
                    "N={n} s={s} m={m}"
                );
            }
        }
    }
}

#[test]
fn divk_power_identity_grid() {
    for n in 3..=6u32 {
        for k in 1..=3u32 {
            let mut alphas = vec![
                Rational::from((2 * k as i64 + 1, 2)),
                Rational::from(k + 1),
                Rational::from(k + 2),
                Rational::from(n),
            ];
            alphas.retain(|a| *a > k && *a <= n + 1);
            for a in &alphas {
                assert!(verify_divk_identity_power(n, k, a).unwrap(), "N={n} k={k} alpha={a}");
            }
        }
    }
}

#[test]
fn divk_log_identity_grid() {
    for n in 2..=6u32 {
        for k in 1..=4u32 {
            assert!(verify_divk_identity_log(n, k).unwrap(), "N={n} k={k}");
        }
    }
}
