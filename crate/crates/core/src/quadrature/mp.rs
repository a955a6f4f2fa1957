use rug::float::Constant;
use rug::Float;

/// Gauss–Legendre nodes and weights on `[−1, 1]` at `prec` bits.
pub fn gauss_legendre_rule(n: usize, prec: u32) -> Vec<(Float, Float)> {
    assert!(n >= 1);
    let work = prec + 32;
    let pi = Float::with_val(work, Constant::Pi);
    let tol = Float::with_val(work, Float::i_exp(1, -(prec as i32)));
    let mut rule = Vec::with_capacity(n);
    for i in 1..=n {
        let guess = Float::with_val(work, &pi * (i as f64 - 0.25)) / (n as f64 + 0.5);
        let mut x = guess.cos();
        let mut dp = Float::with_val(work, 0);
        for _ in 0..100 {
            let (p, d) = legendre(n, &x);
            let dx = Float::with_val(work, &p / &d);
            x -= &dx;
            dp = d;
            if dx.abs() < tol {
                let (_, d) = legendre(n, &x);
                dp = d;
                break;
            }
        }
        let one_minus = Float::with_val(work, 1 - Float::with_val(work, &x * &x));
        let w = Float::with_val(work, 2) / (one_minus * Float::with_val(work, &dp * &dp));
        rule.push((x, w));
    }
    rule
}

/// `(P_n(x), P_n′(x))`.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as u32;
        let t = Float::with_val(prec, x * &p1) * (2 * k - 1);
        let p2 = (t - Float::with_val(prec, &p0 * (k - 1))) / k;
        p0 = p1;
        p1 = p2;
    }
    let num = Float::with_val(prec, x * &p1) - &p0;
    let den = Float::with_val(prec, x * x) - 1;
    let d = num * n as u32 / den;
    (p1, d)
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]` with `panels`
/// equal panels of `n` nodes each, all arithmetic at `prec` bits.
pub fn mp_integrate<F: Fn(&Float) -> Float>(
    f: F,
    a: &Float,
    b: &Float,
    n: usize,
    panels: usize,
    prec: u32,
) -> Float {
    let rule = gauss_legendre_rule(n, prec);
    let width = Float::with_val(prec, b - a) / panels as u32;
    let half = Float::with_val(prec, &width / 2u32);
    let mut total = Float::with_val(prec, 0);
    for p in 0..panels {
        let left = Float::with_val(prec, a + Float::with_val(prec, &width * p as u32));
        let mid = Float::with_val(prec, &left + &half);
        let mut s = Float::with_val(prec, 0);
        for (x, w) in &rule {
            let xx = Float::with_val(prec, &mid + Float::with_val(prec, &half * x));
            s += Float::with_val(prec, w * f(&xx));
        }
        total += s * &half;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let prec = 226;
        let a = Float::with_val(prec, 0);
        let b = Float::with_val(prec, 1);
        let v = mp_integrate(|x| { use rug::ops::Pow; Float::with_val(prec, x.pow(9u32)) }, &a, &b, 8, 1, prec);
        let tenth = Float::with_val(prec, 1) / 10u32;
        assert!((v - tenth).abs() < 1e-60);
    }

    #[test]
    fn integrates_reciprocal() {
        let prec = 226;
        let a = Float::with_val(prec, 1);
        let b = Float::with_val(prec, 2);
        let v = mp_integrate(|x| Float::with_val(prec, x.recip_ref()), &a, &b, 30, 4, prec);
        let ln2 = Float::with_val(prec, Constant::Log2);
        assert!((v - ln2).abs() < 1e-60);
    }
}
