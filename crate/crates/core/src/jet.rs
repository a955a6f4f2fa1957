//! Truncated Taylor series in one variable (Taylor-mode differentiation).

use std::ops::{Add, Mul, Neg, Sub};

/// Normalized Taylor coefficients `a_0 + a_1 h + … + a_n h^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    c: Vec<f64>,
}

impl Jet {
    pub fn from_coeffs(c: Vec<f64>) -> Self {
        assert!(!c.is_empty(), "a jet needs at least one coefficient");
        Jet { c }
    }

    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Jet { c }
    }

    /// The identity `x_0 + h`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = x0;
        if order >= 1 {
            c[1] = 1.0;
        }
        Jet { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `[f, f′, f″, …]`.
    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.c
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if k > 0 {
                    fact *= k as f64;
                }
                a * fact
            })
            .collect()
    }

    pub fn from_derivatives(d: &[f64]) -> Self {
        let mut fact = 1.0;
        Jet {
            c: d.iter()
                .enumerate()
                .map(|(k, v)| {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    v / fact
                })
                .collect(),
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Jet {
            c: self.c[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Jet {
            c: self.c.iter().map(|a| a * s).collect(),
        }
    }

    /// Substitutes `h → s·h`.
    pub fn rescale_variable(&self, s: f64) -> Self {
        let mut p = 1.0;
        Jet {
            c: self
                .c
                .iter()
                .map(|a| {
                    let v = a * p;
                    p *= s;
                    v
                })
                .collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() == 1 {
            return Jet { c: vec![0.0] };
        }
        Jet {
            c: (1..self.c.len()).map(|k| self.c[k] * k as f64).collect(),
        }
    }

    /// Antiderivative with constant term `c0`; the order grows by one.
    pub fn integral(&self, c0: f64) -> Self {
        let mut c = Vec::with_capacity(self.c.len() + 1);
        c.push(c0);
        c.extend(self.c.iter().enumerate().map(|(k, a)| a / (k + 1) as f64));
        Jet { c }
    }

    pub fn recip(&self) -> Self {
        let a = &self.c;
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = 1.0 / a[0];
        for k in 1..n {
            let s: f64 = (1..=k).map(|i| a[i] * b[k - i]).sum();
            b[k] = -s / a[0];
        }
        Jet { c: b }
    }

    pub fn ln(&self) -> Self {
        let a = &self.c;
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = a[0].ln();
        for k in 1..n {
            let s: f64 = (1..k).map(|i| i as f64 * b[i] * a[k - i]).sum();
            b[k] = (a[k] - s / k as f64) / a[0];
        }
        Jet { c: b }
    }

    pub fn exp(&self) -> Self {
        let a = &self.c;
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = a[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|i| i as f64 * a[i] * b[k - i]).sum();
            b[k] = s / k as f64;
        }
        Jet { c: b }
    }

    /// `self^s` for `a_0 > 0`.
    pub fn powf(&self, s: f64) -> Self {
        let a = &self.c;
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = a[0].powf(s);
        for k in 1..n {
            let acc: f64 = (1..=k)
                .map(|i| (s * i as f64 - (k - i) as f64) * a[i] * b[k - i])
                .sum();
            b[k] = acc / (k as f64 * a[0]);
        }
        Jet { c: b }
    }

    /// `f ∘ self` where `outer` is the jet of `f` at `self.value()`.
    pub fn compose(outer: &Jet, inner: &Jet) -> Jet {
        let n = inner.order().min(outer.order());
        let mut delta = inner.truncate(n);
        delta.c[0] = 0.0;
        let mut out = vec![0.0; n + 1];
        out[0] = outer.c[0];
        let mut power = Jet::constant(1.0, n);
        for k in 1..=n {
            power = &power * &delta;
            for (o, p) in out.iter_mut().zip(power.c.iter()) {
                *o += outer.c[k] * p;
            }
        }
        Jet { c: out }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        Jet {
            c: (0..n).map(|k| self.c[k] + o.c[k]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        Jet {
            c: (0..n).map(|k| self.c[k] - o.c[k]).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        let mut c = vec![0.0; n];
        for (i, a) in self.c.iter().take(n).enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in o.c.iter().take(n - i).enumerate() {
                c[i + j] += a * b;
            }
        }
        Jet { c }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn ln_of_variable() {
        let x = Jet::variable(2.0, 5);
        let d = x.ln().derivatives();
        // (ln x)^{(k)} = (−1)^{k−1}(k−1)!/x^k
        let expect = [2f64.ln(), 0.5, -0.25, 0.25, -0.375, 0.75];
        for (a, b) in d.iter().zip(expect) {
            assert!(close(*a, b, 1e-14), "{a} vs {b}");
        }
    }

    #[test]
    fn exp_ln_roundtrip() {
        let x = Jet::from_coeffs(vec![1.3, 0.4, -0.2, 0.7, 0.1]);
        let y = x.ln().exp();
        for (a, b) in y.coeffs().iter().zip(x.coeffs()) {
            assert!(close(*a, *b, 1e-13));
        }
    }

    #[test]
    fn powf_matches_recip_and_square() {
        let x = Jet::from_coeffs(vec![1.7, 0.3, 0.2, -0.1]);
        let r = x.powf(-1.0);
        for (a, b) in r.coeffs().iter().zip(x.recip().coeffs()) {
            assert!(close(*a, *b, 1e-14));
        }
        let sq = x.powf(2.0);
        for (a, b) in sq.coeffs().iter().zip((&x * &x).coeffs()) {
            assert!(close(*a, *b, 1e-14));
        }
    }

    #[test]
    fn composition_with_square() {
        // g(t) = t^3 at t = r², r = 1.5: (r²)³ = r⁶
        let r = 1.5;
        let inner = {
            let x = Jet::variable(r, 6);
            &x * &x
        };
        let outer = Jet::variable(r * r, 6).powf(3.0);
        let c = Jet::compose(&outer, &inner);
        let direct = Jet::variable(r, 6).powf(6.0);
        for (a, b) in c.coeffs().iter().zip(direct.coeffs()) {
            assert!(close(*a, *b, 1e-13), "{a} vs {b}");
        }
    }

    #[test]
    fn integral_inverts_derivative() {
        let x = Jet::from_coeffs(vec![0.5, 1.0, 2.0, 3.0]);
        let back = x.derivative().integral(0.5);
        assert_eq!(back, x);
    }
}
