//! Polynomial smoothstep transitions and seeded random test bumps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::profile::{RadialFunction, RadialProfile, Variable};

fn binomial_f64(n: u32, k: u32) -> f64 {
    Integer::binomial_u(n, k).complete().to_f64()
}

use rug::Complete;

/// The order-`K` smoothstep `S(x)`: 0 for `x ≤ 0`, 1 for `x ≥ 1`, and on
/// `[0, 1]` the polynomial with `S′(x) = A·x^K(1 − x)^K`. It is `C^K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Smoothstep {
    order: u32,
    tail: Vec<f64>,
    lead: f64,
    kbinom: Vec<f64>,
}

impl Smoothstep {
    pub fn new(order: u32) -> Self {
        let n = 2 * order + 1;
        Smoothstep {
            order,
            tail: (0..=n).map(|j| binomial_f64(n, j)).collect(),
            lead: n as f64 * binomial_f64(2 * order, order),
            kbinom: (0..=order).map(|i| binomial_f64(order, i)).collect(),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Bernstein tail `Σ_{j>K} C(2K+1, j) x^j (1 − x)^{2K+1−j}`.
    pub fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let n = 2 * self.order + 1;
        let y = 1.0 - x;
        // Sum whichever tail has fewer cancellation issues.
        if x <= 0.5 {
            (self.order + 1..=n)
                .map(|j| self.tail[j as usize] * x.powi(j as i32) * y.powi((n - j) as i32))
                .sum()
        } else {
            1.0 - (0..=self.order)
                .map(|j| self.tail[j as usize] * x.powi(j as i32) * y.powi((n - j) as i32))
                .sum::<f64>()
        }
    }

    /// Taylor jet of `S` at `x0`.
    pub fn jet(&self, x0: f64, order: usize) -> Jet {
        if x0 < 0.0 {
            return Jet::constant(0.0, order);
        }
        if x0 > 1.0 {
            return Jet::constant(1.0, order);
        }
        if order == 0 {
            return Jet::constant(self.value(x0), 0);
        }
        let k = self.order as usize;
        let m = order - 1;
        let y0 = 1.0 - x0;
        let upto = m.min(k);
        let mut xa = vec![0.0; m + 1];
        let mut ya = vec![0.0; m + 1];
        for i in 0..=upto {
            xa[i] = self.kbinom[i] * x0.powi((k - i) as i32);
            let s = if i % 2 == 1 { -1.0 } else { 1.0 };
            ya[i] = s * self.kbinom[i] * y0.powi((k - i) as i32);
        }
        let d = &Jet::from_coeffs(xa) * &Jet::from_coeffs(ya);
        d.scale(self.lead).integral(self.value(x0))
    }

    /// Exact monomial coefficients of the polynomial piece, `S(x) = Σ c_i x^i`.
    pub fn monomials(&self) -> Vec<Rational> {
        let k = self.order;
        let lead = Integer::from(2 * k + 1) * Integer::binomial_u(2 * k, k).complete();
        let mut c = vec![Rational::new(); (2 * k + 2) as usize];
        for i in 0..=k {
            let mut term = Rational::from(Integer::binomial_u(k, i).complete() * &lead);
            term /= k + i + 1;
            if i % 2 == 1 {
                term = -term;
            }
            c[(k + i + 1) as usize] = term;
        }
        c
    }
}

/// Coefficients of `p(a·σ + b)` in `σ`.
pub fn compose_affine(p: &[Rational], a: &Rational, b: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::new(); p.len()];
    for (j, cj) in p.iter().enumerate() {
        if cj.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        // (aσ + b)^j = Σ_i C(j,i) a^i b^{j−i} σ^i
        for i in 0..=j {
            let binom = Integer::binomial_u(j as u32, i as u32).complete();
            let ai = rug::ops::Pow::pow(a.clone(), i as u32);
            let bi = rug::ops::Pow::pow(b.clone(), (j - i) as u32);
            out[i] += Rational::from(cj * &ai) * &bi * binom;
        }
    }
    out
}

/// A smoothstep transition on `[a, b]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BumpSpec {
    pub order: u32,
    pub transition: (f64, f64),
}

impl BumpSpec {
    pub fn new(order: u32, a: f64, b: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("smoothstep order must be at least 1"));
        }
        if !(a < b) {
            return Err(Error::domain("transition interval must have a < b"));
        }
        Ok(BumpSpec {
            order,
            transition: (a, b),
        })
    }

    pub fn smoothstep(&self) -> Smoothstep {
        Smoothstep::new(self.order)
    }
}

/// Random bump `g(t) = (c_0 + c_1 t)(1 − S((t − t_a)/(t_b − t_a)))` in
/// `t = r²`, supported in `|x| ≤ √t_b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestBump {
    pub order: u32,
    pub c0: f64,
    pub c1: f64,
    pub t_a: f64,
    pub t_b: f64,
}

#[derive(Debug)]
struct TestBumpFn {
    bump: TestBump,
    step: Smoothstep,
}

impl RadialFunction for TestBumpFn {
    fn jet(&self, t: f64, order: usize) -> Jet {
        let b = &self.bump;
        if t >= b.t_b {
            return Jet::constant(0.0, order);
        }
        let w = b.t_b - b.t_a;
        let s = self.step.jet((t - b.t_a) / w, order).rescale_variable(1.0 / w);
        let cut = &Jet::constant(1.0, order) - &s;
        let lin = &Jet::constant(b.c0, order) + &Jet::variable(t, order).scale(b.c1);
        &lin * &cut
    }
}

impl TestBump {
    pub fn support_radius(&self) -> f64 {
        self.t_b.sqrt()
    }

    pub fn value_at_origin(&self) -> f64 {
        let w = self.t_b - self.t_a;
        self.c0 * (1.0 - Smoothstep::new(self.order).value(-self.t_a / w))
    }

    pub fn profile(&self) -> RadialProfile {
        RadialProfile::composite(
            Variable::RadiusSquared,
            self.order as usize,
            (0.0, self.support_radius()),
            vec![self.t_a.max(0.0).sqrt(), self.support_radius()],
            TestBumpFn {
                bump: self.clone(),
                step: Smoothstep::new(self.order),
            },
        )
    }

    /// `count` bumps drawn from a ChaCha8 stream seeded by `seed`.
    pub fn random_suite(seed: u64, count: usize, order: u32) -> Vec<TestBump> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let t_b: f64 = rng.gen_range(0.5..2.0);
                let t_a = t_b * rng.gen_range(0.0..0.6);
                let c0: f64 = rng.gen_range(0.5..2.0);
                let c1: f64 = rng.gen_range(-1.5..1.5) * c0 / t_b;
                TestBump {
                    order,
                    c0,
                    c1,
                    t_a,
                    t_b,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothstep_endpoints_and_symmetry() {
        for k in 1..10 {
            let s = Smoothstep::new(k);
            assert_eq!(s.value(0.0), 0.0);
            assert_eq!(s.value(1.0), 1.0);
            assert!((s.value(0.5) - 0.5).abs() < 1e-15);
            for x in [0.1, 0.3, 0.77] {
                assert!((s.value(x) + s.value(1.0 - x) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn jet_matches_exact_polynomial() {
        let s = Smoothstep::new(5);
        let mono: Vec<f64> = s.monomials().iter().map(|c| c.to_f64()).collect();
        let x0 = 0.37;
        let jet = s.jet(x0, 6).derivatives();
        // Direct derivatives of the monomial form.
        for (d, got) in jet.iter().enumerate() {
            let mut v = 0.0;
            for (i, c) in mono.iter().enumerate() {
                if i >= d {
                    let ff: f64 = (0..d).map(|j| (i - j) as f64).product();
                    v += c * ff * x0.powi((i - d) as i32);
                }
            }
            assert!((got - v).abs() < 1e-9 * (1.0 + v.abs()), "d={d}: {got} vs {v}");
        }
    }

    #[test]
    fn derivatives_vanish_at_ends() {
        let k = 6;
        let s = Smoothstep::new(k);
        let j0 = s.jet(0.0, k as usize).derivatives();
        let j1 = s.jet(1.0, k as usize).derivatives();
        for d in 1..=k as usize {
            assert!(j0[d].abs() < 1e-12 && j1[d].abs() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn affine_composition() {
        // p(x) = x², p(2σ − 1) = 4σ² − 4σ + 1
        let p = vec![Rational::new(), Rational::new(), Rational::from(1)];
        let c = compose_affine(&p, &Rational::from(2), &Rational::from(-1));
        assert_eq!(c, vec![Rational::from(1), Rational::from(-4), Rational::from(4)]);
    }

    #[test]
    fn random_suite_is_reproducible() {
        assert_eq!(TestBump::random_suite(7, 5, 8), TestBump::random_suite(7, 5, 8));
        assert_ne!(TestBump::random_suite(7, 5, 8), TestBump::random_suite(8, 5, 8));
    }
}
