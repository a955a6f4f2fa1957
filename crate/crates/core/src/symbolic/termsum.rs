use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rug::{Integer, Rational};

use crate::constants::falling_factorial;
use crate::error::{Error, Result};

/// The radial function a [`TermSum`] is built from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseKind {
    /// `v(r) = log r`.
    Log,
    /// `v(r) = r^s`.
    Power(Rational),
    /// An unspecified `v(r)`; derivative factors stay symbolic.
    Abstract,
    /// An unspecified `g` composed with `t = r²`; derivative factors are
    /// `g^{(j)}(r²)` and no negative powers of `r` arise.
    AbstractSquared,
}

impl BaseKind {
    pub fn is_concrete(&self) -> bool {
        matches!(self, BaseKind::Log | BaseKind::Power(_))
    }
}

/// One monomial `v^{(j)}(r) · x^β · r^{−p}`. `deriv = None` means the
/// radial factor is absent (it has been folded into the power of `r`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub deriv: Option<u32>,
    pub beta: Vec<u8>,
    pub radial_power: Rational,
}

/// A symbolic sum `Σ c · v^{(j)}(r) · x^β · r^{−p}` over ℝ^N ∖ {0}.
///
/// The canonical form merges like terms, drops zeros, rewrites derivative
/// factors of concrete bases into powers of `r`, and reduces
/// `x_N² = r² − x_1² − … − x_{N−1}²` so that the last coordinate appears at
/// most linearly. Two sums represent the same function iff their canonical
/// forms are equal.
#[derive(Clone, Debug, PartialEq)]
pub struct TermSum {
    dim: usize,
    base: BaseKind,
    terms: BTreeMap<TermKey, Rational>,
}

impl TermSum {
    pub fn zero(dim: usize, base: BaseKind) -> Self {
        assert!(dim >= 2, "TermSum needs dimension >= 2");
        TermSum {
            dim,
            base,
            terms: BTreeMap::new(),
        }
    }

    /// The base function `v` itself.
    pub fn base_function(dim: usize, base: BaseKind) -> Self {
        let mut t = Self::zero(dim, base);
        let key = TermKey {
            deriv: Some(0),
            beta: vec![0; dim],
            radial_power: Rational::new(),
        };
        t.insert(key, Rational::from(1));
        t
    }

    /// `c · r^{−p}`.
    pub fn radial_monomial(dim: usize, base: BaseKind, c: Rational, p: Rational) -> Self {
        let mut t = Self::zero(dim, base);
        let key = TermKey {
            deriv: None,
            beta: vec![0; dim],
            radial_power: p,
        };
        t.insert(key, c);
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> &BaseKind {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (lexicographic `(j, β, p)`) order.
    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Rational)> {
        self.terms.iter()
    }

    fn insert(&mut self, key: TermKey, coeff: Rational) {
        if coeff.cmp0() == Ordering::Equal {
            return;
        }
        let (key, coeff) = collapse(&self.base, key, coeff);
        let last = self.dim - 1;
        if key.beta[last] >= 2 {
            // x_last² = r² − Σ_{i<last} x_i²
            let mut reduced = key.beta.clone();
            reduced[last] -= 2;
            self.insert(
                TermKey {
                    deriv: key.deriv,
                    beta: reduced.clone(),
                    radial_power: Rational::from(&key.radial_power - 2u32),
                },
                coeff.clone(),
            );
            for i in 0..last {
                let mut b = reduced.clone();
                b[i] += 2;
                self.insert(
                    TermKey {
                        deriv: key.deriv,
                        beta: b,
                        radial_power: key.radial_power.clone(),
                    },
                    Rational::from(-&coeff),
                );
            }
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c += coeff;
                if c.cmp0() == Ordering::Equal {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "TermSum dimension mismatch");
        assert_eq!(self.base, other.base, "TermSum base mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check_compatible(other);
        for (k, c) in &other.terms {
            self.insert(k.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.dim, self.base.clone());
        if c.cmp0() == Ordering::Equal {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), Rational::from(v * c)))
            .collect();
        out
    }

    /// Multiplies by `r^q`.
    pub fn mul_radial_power(&self, q: &Rational) -> Self {
        let mut out = Self::zero(self.dim, self.base.clone());
        for (k, c) in &self.terms {
            out.insert(
                TermKey {
                    deriv: k.deriv,
                    beta: k.beta.clone(),
                    radial_power: Rational::from(&k.radial_power - q),
                },
                c.clone(),
            );
        }
        out
    }

    /// Partial derivative `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.dim, "coordinate index out of range");
        let squared = self.base == BaseKind::AbstractSquared;
        let mut out = Self::zero(self.dim, self.base.clone());
        for (k, c) in &self.terms {
            if let Some(j) = k.deriv {
                let mut beta = k.beta.clone();
                beta[i] += 1;
                if squared {
                    // ∂_i g^{(j)}(|x|²) = 2 x_i g^{(j+1)}
                    out.insert(
                        TermKey {
                            deriv: Some(j + 1),
                            beta,
                            radial_power: k.radial_power.clone(),
                        },
                        Rational::from(c * 2u32),
                    );
                } else {
                    // ∂_i v^{(j)}(r) = v^{(j+1)} x_i / r
                    out.insert(
                        TermKey {
                            deriv: Some(j + 1),
                            beta,
                            radial_power: Rational::from(&k.radial_power + 1u32),
                        },
                        c.clone(),
                    );
                }
            }
            let bi = k.beta[i];
            if bi > 0 {
                let mut beta = k.beta.clone();
                beta[i] -= 1;
                out.insert(
                    TermKey {
                        deriv: k.deriv,
                        beta,
                        radial_power: k.radial_power.clone(),
                    },
                    Rational::from(c * bi as u32),
                );
            }
            if k.radial_power.cmp0() != Ordering::Equal {
                // ∂_i r^{−p} = −p x_i r^{−p−2}
                let mut beta = k.beta.clone();
                beta[i] += 1;
                out.insert(
                    TermKey {
                        deriv: k.deriv,
                        beta,
                        radial_power: Rational::from(&k.radial_power + 2u32),
                    },
                    -Rational::from(c * &k.radial_power),
                );
            }
        }
        out
    }

    /// Restriction to the positive `x_1`-axis: `x = (r, 0, …, 0)`.
    pub fn on_axis(&self) -> AxisForm {
        let mut form = AxisForm::default();
        for (k, c) in &self.terms {
            if k.beta[1..].iter().any(|&b| b != 0) {
                continue;
            }
            let exponent = Rational::from(k.beta[0] as i64) - &k.radial_power;
            form.add(k.deriv, exponent, c.clone());
        }
        form
    }
}

/// Rewrites derivative factors of concrete bases as powers of `r`.
fn collapse(base: &BaseKind, key: TermKey, coeff: Rational) -> (TermKey, Rational) {
    match (base, key.deriv) {
        (BaseKind::Log, Some(j)) if j >= 1 => {
            // (log r)^{(j)} = (−1)^{j−1} (j−1)! r^{−j}
            let mut c = coeff * Integer::from(Integer::factorial(j - 1));
            if (j - 1) % 2 == 1 {
                c = -c;
            }
            (
                TermKey {
                    deriv: None,
                    beta: key.beta,
                    radial_power: key.radial_power + j,
                },
                c,
            )
        }
        (BaseKind::Power(s), Some(j)) => {
            // (r^s)^{(j)} = (s)_j r^{s−j}
            let c = coeff * falling_factorial(s, j);
            (
                TermKey {
                    deriv: None,
                    beta: key.beta,
                    radial_power: key.radial_power + j - s,
                },
                c,
            )
        }
        _ => (key, coeff),
    }
}

/// A function of `r` on the axis: `Σ c · v^{(j)}(r) · r^e`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxisForm {
    terms: BTreeMap<(Option<u32>, Rational), Rational>,
}

impl AxisForm {
    fn add(&mut self, deriv: Option<u32>, exponent: Rational, c: Rational) {
        let key = (deriv, exponent);
        let entry = self.terms.entry(key.clone()).or_default();
        *entry += c;
        if entry.cmp0() == Ordering::Equal {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Option<u32>, Rational), &Rational)> {
        self.terms.iter()
    }

    /// Exact value for a concrete base at a rational radius; errors if a
    /// derivative factor is symbolic or a power of `r` is irrational.
    pub fn eval_exact(&self, base: &BaseKind, r: &Rational) -> Result<Rational> {
        if r.cmp0() != Ordering::Greater {
            return Err(Error::domain("axis evaluation needs r > 0"));
        }
        let mut acc = Rational::new();
        for ((deriv, e), c) in &self.terms {
            match (base, deriv) {
                (_, None) => {}
                (BaseKind::Log, Some(0)) if *r == 1 => continue,
                _ => {
                    return Err(Error::domain(format!(
                        "symbolic factor v^({:?}) cannot be evaluated exactly for base {base:?}",
                        deriv
                    )))
                }
            }
            let p = rational_power(r, e).ok_or_else(|| {
                Error::domain(format!("r^{e} is irrational at r = {r}"))
            })?;
            acc += Rational::from(c * &p);
        }
        Ok(acc)
    }

    pub(crate) fn compile(&self) -> CompiledForm {
        CompiledForm {
            terms: self
                .terms
                .iter()
                .map(|((d, e), c)| CompiledTerm {
                    deriv: d.map(|j| j as usize),
                    exponent: e.to_f64(),
                    int_exponent: if *e.denom() == 1 { e.numer().to_i32() } else { None },
                    coeff: c.to_f64(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for AxisForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((d, e), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if let Some(j) = d {
                write!(f, "·v{j}")?;
            }
            write!(f, "·r^({e})")?;
        }
        Ok(())
    }
}

impl fmt::Display for TermSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if let Some(j) = k.deriv {
                write!(f, "·v{j}")?;
            }
            for (idx, b) in k.beta.iter().enumerate() {
                if *b > 0 {
                    write!(f, "·x{}^{b}", idx + 1)?;
                }
            }
            if k.radial_power.cmp0() != Ordering::Equal {
                write!(f, "·r^({})", Rational::from(-&k.radial_power))?;
            }
        }
        Ok(())
    }
}

/// `r^e` when it is rational.
pub(crate) fn rational_power(r: &Rational, e: &Rational) -> Option<Rational> {
    let d = e.denom().to_u32()?;
    let n = e.numer().to_i32()?;
    let root = |x: &Integer| -> Option<Integer> {
        let (q, rem) = x.clone().root_rem(Integer::new(), d);
        (rem == 0).then_some(q)
    };
    let base = Rational::from((root(r.numer())?, root(r.denom())?));
    let mag = rug::ops::Pow::pow(base, n.unsigned_abs());
    Some(if n < 0 { mag.recip() } else { mag })
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledTerm {
    pub deriv: Option<usize>,
    pub exponent: f64,
    pub int_exponent: Option<i32>,
    pub coeff: f64,
}

/// Floating-point evaluation plan for an [`AxisForm`].
#[derive(Clone, Debug)]
pub(crate) struct CompiledForm {
    pub terms: Vec<CompiledTerm>,
}

impl CompiledForm {
    /// `derivs[j]` holds the j-th derivative factor; `r_power` is the
    /// coordinate whose powers appear (the radius).
    pub fn eval(&self, r: f64, derivs: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let v = match t.deriv {
                    Some(j) => derivs[j],
                    None => 1.0,
                };
                let p = match t.int_exponent {
                    Some(k) => r.powi(k),
                    None => r.powf(t.exponent),
                };
                t.coeff * v * p
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(a: i64) -> Rational {
        Rational::from(a)
    }

    #[test]
    fn gradient_of_log_in_plane() {
        let v = TermSum::base_function(2, BaseKind::Log);
        let d0 = v.partial(0);
        // x_1 / r²
        let expect = {
            let mut t = TermSum::zero(2, BaseKind::Log);
            t.insert(
                TermKey {
                    deriv: None,
                    beta: vec![1, 0],
                    radial_power: int(2),
                },
                int(1),
            );
            t
        };
        assert_eq!(d0, expect);
    }

    #[test]
    fn reduction_uses_sphere_relation() {
        // x_1² + x_2² + x_3² − r² is identically zero
        let dim = 3;
        let mut t = TermSum::zero(dim, BaseKind::Abstract);
        for i in 0..dim {
            let mut beta = vec![0; dim];
            beta[i] = 2;
            t.insert(
                TermKey {
                    deriv: None,
                    beta,
                    radial_power: int(0),
                },
                int(1),
            );
        }
        t.insert(
            TermKey {
                deriv: None,
                beta: vec![0; dim],
                radial_power: int(-2),
            },
            int(-1),
        );
        assert!(t.is_zero(), "{t}");
    }

    #[test]
    fn laplacian_of_power_is_power() {
        // Δ r^s = s(s + N − 2) r^{s−2}
        for dim in 2..=5usize {
            let s = Rational::from((3, 2));
            let base = BaseKind::Power(s.clone());
            let v = TermSum::base_function(dim, base.clone());
            let mut lap = TermSum::zero(dim, base.clone());
            for i in 0..dim {
                lap.add_assign(&v.partial(i).partial(i));
            }
            let coeff = (&s * (s.clone() + (dim as i64 - 2)));
            let expect = TermSum::radial_monomial(dim, base, coeff, Rational::from(2 - &s));
            assert_eq!(lap, expect, "N = {dim}");
        }
    }

    #[test]
    fn squared_base_chain_rule() {
        // ∂_1 g(|x|²) on the axis = 2 r g'(r²)
        let v = TermSum::base_function(3, BaseKind::AbstractSquared);
        let form = v.partial(0).on_axis();
        let terms: Vec<_> = form.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(*terms[0].0, (Some(1), int(1)));
        assert_eq!(*terms[0].1, int(2));
    }

    #[test]
    fn rational_powers() {
        assert_eq!(rational_power(&int(4), &Rational::from((3, 2))), Some(int(8)));
        assert_eq!(rational_power(&int(2), &Rational::from((1, 2))), None);
        assert_eq!(rational_power(&int(2), &int(-3)), Some(Rational::from((1, 8))));
    }
}
