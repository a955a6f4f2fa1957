//! Exact real numbers of the form `c · ∏ pᵢ^{fᵢ} · π^e`.
//!
//! `c` is a big rational, each `pᵢ` is a prime carrying a fractional exponent
//! `fᵢ ∈ (0, 1)`, and `e` is a rational power of π. Because distinct primes
//! and π are multiplicatively independent this form is canonical: two exact
//! values are equal iff their representations are identical. The set is
//! closed under products, quotients and rational powers, which covers every
//! closed-form constant in this crate. Sums are exact only for like terms;
//! anything else falls back to an MPFR float flagged as inexact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use rug::float::Constant;
use rug::integer::IsPrime;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Mantissa width used for inexact fallbacks unless overridden.
pub const DEFAULT_PRECISION_BITS: u32 = 113;

static DEFAULT_PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_BITS);

/// Extra working bits used when rounding an exact value to a float.
const GUARD_BITS: u32 = 64;

/// Trial division bound used when factoring radicands.
const TRIAL_DIVISION_BOUND: u32 = 1 << 17;

pub fn default_precision() -> u32 {
    DEFAULT_PRECISION.load(AtomicOrdering::Relaxed)
}

/// Sets the mantissa width of inexact fallbacks created afterwards.
pub fn set_default_precision(bits: u32) {
    DEFAULT_PRECISION.store(bits.max(24), AtomicOrdering::Relaxed);
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Exact {
        coeff: Rational,
        radicals: BTreeMap<Integer, Rational>,
        pi_power: Rational,
    },
    Approx(Float),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactReal {
    repr: Repr,
}

impl ExactReal {
    pub fn zero() -> Self {
        Self::from_rational(Rational::new())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::from(1))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from(n))
    }

    pub fn from_rational(q: impl Into<Rational>) -> Self {
        Self::normalized(q.into(), BTreeMap::new(), Rational::new())
    }

    /// `π^e` for a rational exponent.
    pub fn pi_pow(e: impl Into<Rational>) -> Self {
        Self::normalized(Rational::from(1), BTreeMap::new(), e.into())
    }

    pub fn pi() -> Self {
        Self::pi_pow(1)
    }

    /// Wraps an MPFR value; the result is flagged inexact.
    pub fn approx(value: Float) -> Self {
        ExactReal {
            repr: Repr::Approx(value),
        }
    }

    fn normalized(
        mut coeff: Rational,
        radicals: BTreeMap<Integer, Rational>,
        pi_power: Rational,
    ) -> Self {
        if coeff.cmp0() == Ordering::Equal {
            return ExactReal {
                repr: Repr::Exact {
                    coeff,
                    radicals: BTreeMap::new(),
                    pi_power: Rational::new(),
                },
            };
        }
        let mut kept = BTreeMap::new();
        for (p, e) in radicals {
            let whole = e.clone().floor();
            let frac = e - &whole;
            let whole = whole
                .numer()
                .to_i32()
                .expect("radical exponent fits in i32");
            if whole != 0 {
                coeff *= Rational::from(&p).pow(whole);
            }
            if frac.cmp0() != Ordering::Equal {
                kept.insert(p, frac);
            }
        }
        ExactReal {
            repr: Repr::Exact {
                coeff,
                radicals: kept,
                pi_power,
            },
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact { .. })
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Exact { coeff, .. } => coeff.cmp0() == Ordering::Equal,
            Repr::Approx(f) => f.is_zero(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.repr {
            Repr::Exact { coeff, .. } => coeff.cmp0() == Ordering::Greater,
            Repr::Approx(f) => f.cmp0() == Some(Ordering::Greater),
        }
    }

    /// Rational coefficient of an exact value.
    pub fn coeff(&self) -> Option<&Rational> {
        match &self.repr {
            Repr::Exact { coeff, .. } => Some(coeff),
            Repr::Approx(_) => None,
        }
    }

    /// Exponent of π of an exact value.
    pub fn pi_power(&self) -> Option<&Rational> {
        match &self.repr {
            Repr::Exact { pi_power, .. } => Some(pi_power),
            Repr::Approx(_) => None,
        }
    }

    /// Integer `q` with π-part `π^{q/2}`, when the exponent is a half-integer.
    pub fn pi_half_power(&self) -> Option<i64> {
        let e = Rational::from(self.pi_power()? * 2u32);
        if *e.denom() == 1 {
            e.numer().to_i64()
        } else {
            None
        }
    }

    /// Prime radicals `p^f` with `0 < f < 1`.
    pub fn radicals(&self) -> Option<&BTreeMap<Integer, Rational>> {
        match &self.repr {
            Repr::Exact { radicals, .. } => Some(radicals),
            Repr::Approx(_) => None,
        }
    }

    /// The value as a rational, when it has no radical or π part.
    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.repr {
            Repr::Exact {
                coeff,
                radicals,
                pi_power,
            } if radicals.is_empty() && pi_power.cmp0() == Ordering::Equal => Some(coeff),
            _ => None,
        }
    }

    /// Rounds to `prec` bits. Exact values are evaluated with guard bits
    /// before the final rounding.
    pub fn to_float(&self, prec: u32) -> Float {
        match &self.repr {
            Repr::Approx(f) => Float::with_val(prec, f),
            Repr::Exact {
                coeff,
                radicals,
                pi_power,
            } => {
                let wp = prec + GUARD_BITS;
                let mut v = Float::with_val(wp, coeff);
                for (p, e) in radicals {
                    let base = Float::with_val(wp, p);
                    if *e == Rational::from((1, 2)) {
                        v *= base.sqrt();
                    } else {
                        v *= base.pow(Float::with_val(wp, e));
                    }
                }
                if pi_power.cmp0() != Ordering::Equal {
                    let pi = Float::with_val(wp, Constant::Pi);
                    v *= pi.pow(Float::with_val(wp, pi_power));
                }
                Float::with_val(prec, v)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(64).to_f64()
    }

    fn working_precision(&self, other: &Self) -> u32 {
        let p = |x: &Self| match &x.repr {
            Repr::Approx(f) => f.prec(),
            Repr::Exact { .. } => 0,
        };
        p(self).max(p(other)).max(default_precision())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (&self.repr, &other.repr) {
            (
                Repr::Exact {
                    coeff: c1,
                    radicals: r1,
                    pi_power: e1,
                },
                Repr::Exact {
                    coeff: c2,
                    radicals: r2,
                    pi_power: e2,
                },
            ) => {
                let mut radicals = r1.clone();
                for (p, e) in r2 {
                    *radicals.entry(p.clone()).or_insert_with(Rational::new) += e;
                }
                Self::normalized(
                    Rational::from(c1 * c2),
                    radicals,
                    Rational::from(e1 + e2),
                )
            }
            _ => {
                let prec = self.working_precision(other);
                Self::approx(self.to_float(prec) * other.to_float(prec))
            }
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("reciprocal of zero"));
        }
        match &self.repr {
            Repr::Exact {
                coeff,
                radicals,
                pi_power,
            } => {
                let radicals = radicals
                    .iter()
                    .map(|(p, e)| (p.clone(), Rational::from(-e)))
                    .collect();
                Ok(Self::normalized(
                    coeff.clone().recip(),
                    radicals,
                    Rational::from(-pi_power),
                ))
            }
            Repr::Approx(f) => Ok(Self::approx(Float::with_val(f.prec(), 1) / f)),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Exact {
                coeff,
                radicals,
                pi_power,
            } => ExactReal {
                repr: Repr::Exact {
                    coeff: Rational::from(-coeff),
                    radicals: radicals.clone(),
                    pi_power: pi_power.clone(),
                },
            },
            Repr::Approx(f) => Self::approx(Float::with_val(f.prec(), -f)),
        }
    }

    /// Sum; exact when one side is zero or both share radical and π parts.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_exact() && self.is_zero() {
            return other.clone();
        }
        if other.is_exact() && other.is_zero() {
            return self.clone();
        }
        match (&self.repr, &other.repr) {
            (
                Repr::Exact {
                    coeff: c1,
                    radicals: r1,
                    pi_power: e1,
                },
                Repr::Exact {
                    coeff: c2,
                    radicals: r2,
                    pi_power: e2,
                },
            ) if r1 == r2 && e1 == e2 => {
                Self::normalized(Rational::from(c1 + c2), r1.clone(), e1.clone())
            }
            _ => {
                let prec = self.working_precision(other);
                Self::approx(self.to_float(prec) + other.to_float(prec))
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: impl Into<Rational>) -> Self {
        self.mul(&Self::from_rational(q))
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        self.pow(&Rational::from(n))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.pow(&Rational::from((1, 2)))
    }

    /// Rational power. Stays exact whenever the rational coefficient factors
    /// completely; otherwise returns an MPFR approximation.
    pub fn pow(&self, e: &Rational) -> Result<Self> {
        if e.cmp0() == Ordering::Equal {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return if e.cmp0() == Ordering::Greater {
                Ok(Self::zero())
            } else {
                Err(Error::domain("non-positive power of zero"))
            };
        }
        let (coeff, radicals, pi_power) = match &self.repr {
            Repr::Approx(f) => {
                if f.cmp0() == Some(Ordering::Less) && *e.denom() != 1 {
                    return Err(Error::domain("fractional power of a negative value"));
                }
                let prec = f.prec();
                let v = if *e.denom() == 1 {
                    let n = e.numer().to_i32().ok_or_else(|| Error::domain("exponent too large"))?;
                    Float::with_val(prec, f.pow(n))
                } else {
                    Float::with_val(prec, f.pow(Float::with_val(prec, e)))
                };
                return Ok(Self::approx(v));
            }
            Repr::Exact {
                coeff,
                radicals,
                pi_power,
            } => (coeff, radicals, pi_power),
        };
        let n = e
            .numer()
            .to_i32()
            .ok_or_else(|| Error::domain("exponent numerator too large"))?;
        let d = e
            .denom()
            .to_u32()
            .ok_or_else(|| Error::domain("exponent denominator too large"))?;
        let negative = coeff.cmp0() == Ordering::Less;
        if negative && d % 2 == 0 {
            return Err(Error::domain("even root of a negative value"));
        }
        let sign = if negative && n % 2 != 0 { -1 } else { 1 };
        let magnitude = Rational::from(coeff.abs_ref());

        let mut out_radicals: BTreeMap<Integer, Rational> = radicals
            .iter()
            .map(|(p, f)| (p.clone(), Rational::from(f * e)))
            .collect();
        let out_pi = Rational::from(pi_power * e);

        let out_coeff = if let Some(root) = rational_root(&magnitude, d) {
            root.pow(n) * sign
        } else {
            let (num, den) = magnitude.into_numer_denom();
            let (Some(fnum), Some(fden)) = (factor(&num), factor(&den)) else {
                let prec = default_precision();
                let v = Float::with_val(prec, self.to_float(prec).pow(Float::with_val(prec, e)));
                return Ok(Self::approx(v));
            };
            for (p, k) in fnum {
                *out_radicals.entry(p).or_default() += Rational::from(k) * e;
            }
            for (p, k) in fden {
                *out_radicals.entry(p).or_default() -= Rational::from(k) * e;
            }
            Rational::from(sign)
        };
        Ok(Self::normalized(out_coeff, out_radicals, out_pi))
    }

    /// Structural equality of exact values; `None` if either side is inexact.
    pub fn exact_eq(&self, other: &Self) -> Option<bool> {
        match (&self.repr, &other.repr) {
            (Repr::Exact { .. }, Repr::Exact { .. }) => Some(self.repr == other.repr),
            _ => None,
        }
    }

    /// Relative comparison at the working precision of the operands.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        let prec = self.working_precision(other);
        let a = self.to_float(prec);
        let b = other.to_float(prec);
        let diff = Float::with_val(prec, &a - &b).abs();
        let scale = Float::with_val(prec, a.abs_ref()).max(&Float::with_val(prec, b.abs_ref()));
        diff <= scale * rel_tol || diff.is_zero()
    }

    /// Decimal rendering with enough digits for `prec` bits.
    pub fn to_decimal(&self, prec: u32) -> String {
        let digits = ((prec as f64) * std::f64::consts::LOG10_2).ceil() as usize + 1;
        let f = self.to_float(prec);
        
        f.to_string_radix(10, Some(digits))
    }

    /// Human-oriented rendering such as `4π`, `6√π` or `1/(16√3·π²)`.
    pub fn pretty(&self) -> String {
        match &self.repr {
            Repr::Approx(f) => format!("≈{}", f.to_string_radix(10, Some(18))),
            Repr::Exact {
                coeff,
                radicals,
                pi_power,
            } => pretty_exact(coeff, radicals, pi_power),
        }
    }
}

impl fmt::Display for ExactReal {
    /// Stable grammar: `rational[·√n][·p^(a/b)]*[·π^(q/2)]`.
    ///
    /// Radicals with exponent 1/2 are grouped into one `√n`; other radicals
    /// are listed by increasing prime. The π exponent is written over 2 when
    /// it is a half-integer and in lowest terms otherwise. Inexact values are
    /// prefixed with `~`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Approx(v) => write!(f, "~{}", v.to_string_radix(10, Some(20))),
            Repr::Exact {
                coeff,
                radicals,
                pi_power,
            } => {
                write!(f, "{coeff}")?;
                let half = Rational::from((1, 2));
                let sqrt_part: Integer = radicals
                    .iter()
                    .filter(|(_, e)| **e == half)
                    .map(|(p, _)| p.clone())
                    .product();
                if sqrt_part != 1 {
                    write!(f, "·√{sqrt_part}")?;
                }
                for (p, e) in radicals.iter().filter(|(_, e)| **e != half) {
                    write!(f, "·{p}^({e})")?;
                }
                if pi_power.cmp0() != Ordering::Equal {
                    let twice = Rational::from(pi_power * 2u32);
                    if *twice.denom() == 1 {
                        write!(f, "·π^({}/2)", twice.numer())?;
                    } else {
                        write!(f, "·π^({pi_power})")?;
                    }
                }
                Ok(())
            }
        }
    }
}

fn superscript(n: &Integer) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| match c.to_digit(10) {
            Some(d) => DIGITS[d as usize],
            None => '⁻',
        })
        .collect()
}

fn pi_token(e: &Rational) -> String {
    if *e == 1 {
        "π".to_string()
    } else if *e.denom() == 1 {
        format!("π{}", superscript(e.numer()))
    } else if *e == Rational::from((1, 2)) {
        "√π".to_string()
    } else {
        format!("π^({e})")
    }
}

/// Joins factor tokens; numbers glue directly onto a following symbol.
fn join_tokens(tokens: &[String]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            let prev_numeric = tokens[i - 1].chars().all(|c| c.is_ascii_digit());
            if !prev_numeric {
                out.push('·');
            }
        }
        out.push_str(t);
    }
    out
}

fn pretty_exact(
    coeff: &Rational,
    radicals: &BTreeMap<Integer, Rational>,
    pi_power: &Rational,
) -> String {
    let sign = if coeff.cmp0() == Ordering::Less { "-" } else { "" };
    let num = Integer::from(coeff.numer().abs_ref());
    let mut den = coeff.denom().clone();

    let half = Rational::from((1, 2));
    let all_half = radicals.values().all(|e| *e == half);
    let sqrt_part: Integer = radicals.keys().cloned().product();

    let mut top: Vec<String> = Vec::new();
    let mut bottom: Vec<String> = Vec::new();

    // 1/48·√3 reads better as 1/(16√3).
    let move_sqrt =
        !radicals.is_empty() && all_half && num == 1 && den.is_divisible(&sqrt_part);
    if move_sqrt {
        den = den.div_exact(&sqrt_part);
    }

    if num != 1 {
        top.push(num.to_string());
    }
    if !move_sqrt {
        if all_half && !radicals.is_empty() {
            top.push(format!("√{sqrt_part}"));
        } else {
            for (p, e) in radicals {
                top.push(format!("{p}^({e})"));
            }
        }
    }
    match pi_power.cmp0() {
        Ordering::Greater => top.push(pi_token(pi_power)),
        Ordering::Less => {}
        Ordering::Equal => {}
    }

    if den != 1 {
        bottom.push(den.to_string());
    }
    if move_sqrt {
        bottom.push(format!("√{sqrt_part}"));
    }
    if pi_power.cmp0() == Ordering::Less {
        bottom.push(pi_token(&Rational::from(-pi_power)));
    }

    let numerator = if top.is_empty() {
        "1".to_string()
    } else {
        join_tokens(&top)
    };
    if bottom.is_empty() {
        return format!("{sign}{numerator}");
    }
    let denominator = join_tokens(&bottom);
    if bottom.len() == 1 && bottom[0].chars().all(|c| c.is_ascii_digit()) {
        format!("{sign}{numerator}/{denominator}")
    } else {
        format!("{sign}{numerator}/({denominator})")
    }
}

/// Exact `d`-th root of a non-negative rational, if it exists.
fn rational_root(x: &Rational, d: u32) -> Option<Rational> {
    if d == 1 {
        return Some(x.clone());
    }
    let root = |n: &Integer| -> Option<Integer> {
        let (r, rem) = n.clone().root_rem(Integer::new(), d);
        (rem == 0).then_some(r)
    };
    Some(Rational::from((root(x.numer())?, root(x.denom())?)))
}

/// Prime factorisation of a positive integer by trial division, accepting a
/// probable-prime or perfect-power cofactor. `None` if a composite cofactor
/// remains.
pub(crate) fn factor(n: &Integer) -> Option<Vec<(Integer, u32)>> {
    let mut n = n.clone();
    let mut out: Vec<(Integer, u32)> = Vec::new();
    if n <= 1 {
        return Some(out);
    }
    fn push(out: &mut Vec<(Integer, u32)>, p: Integer, k: u32) {
        if let Some(slot) = out.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += k;
        } else {
            out.push((p, k));
        }
    }
    let mut p: u32 = 2;
    while p <= TRIAL_DIVISION_BOUND {
        if Integer::from(p) * p > n {
            break;
        }
        let mut k = 0;
        while n.is_divisible_u(p) {
            n.div_exact_u_mut(p);
            k += 1;
        }
        if k > 0 {
            push(&mut out, Integer::from(p), k);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let bound = Integer::from(TRIAL_DIVISION_BOUND) * TRIAL_DIVISION_BOUND;
        if n <= bound || n.is_probably_prime(40) != IsPrime::No {
            push(&mut out, n, 1);
        } else {
            let bits = n.significant_bits();
            let mut done = false;
            for k in (2..=bits).rev() {
                let (r, rem) = n.clone().root_rem(Integer::new(), k);
                if rem == 0 && r > 1 {
                    for (q, j) in factor(&r)? {
                        push(&mut out, q, j * k);
                    }
                    done = true;
                    break;
                }
            }
            if !done {
                return None;
            }
        }
    }
    out.sort();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn zero_is_canonical() {
        let z = ExactReal::pi().scale(0);
        assert_eq!(z, ExactReal::zero());
        assert_eq!(z.pi_half_power(), Some(0));
    }

    #[test]
    fn sqrt_of_48_collects_square() {
        let v = ExactReal::from_int(48).sqrt().unwrap();
        assert_eq!(v.to_string(), "4·√3");
        assert_eq!(v.pretty(), "4√3");
    }

    #[test]
    fn products_fold_radicals() {
        let s2 = ExactReal::from_int(2).sqrt().unwrap();
        assert_eq!(s2.mul(&s2).as_rational(), Some(&Rational::from(2)));
        let c = ExactReal::from_int(2).pow(&q(1, 3)).unwrap();
        assert_eq!(c.powi(3).unwrap().as_rational(), Some(&Rational::from(2)));
    }

    #[test]
    fn pi_powers_combine() {
        let v = ExactReal::pi().pow(&q(1, 2)).unwrap();
        assert_eq!(v.pi_half_power(), Some(1));
        assert_eq!(v.pretty(), "√π");
        assert_eq!(v.mul(&v), ExactReal::pi());
    }

    #[test]
    fn pretty_moves_root_to_denominator() {
        // 1/(√48 · 4π²)
        let v = ExactReal::from_int(48)
            .sqrt()
            .unwrap()
            .mul(&ExactReal::pi_pow(2).scale(4))
            .recip()
            .unwrap();
        assert_eq!(v.pretty(), "1/(16√3·π²)");
        assert_eq!(v.to_string(), "1/48·√3·π^(-4/2)");
    }

    #[test]
    fn pretty_simple_forms() {
        assert_eq!(ExactReal::pi().scale(4).pretty(), "4π");
        assert_eq!(ExactReal::pi().scale(8).recip().unwrap().pretty(), "1/(8π)");
        assert_eq!(ExactReal::from_rational(q(-3, 4)).pretty(), "-3/4");
        assert_eq!(ExactReal::pi_pow(2).scale(32).pretty(), "32π²");
    }

    #[test]
    fn to_float_is_accurate() {
        let v = ExactReal::pi().scale(4);
        let f = v.to_float(200);
        let expect = Float::with_val(200, Constant::Pi) * 4u32;
        assert_eq!(f, expect);
        assert!((ExactReal::from_int(2).sqrt().unwrap().to_f64() - 2f64.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn negative_base_roots() {
        let v = ExactReal::from_int(-8).pow(&q(1, 3)).unwrap();
        assert_eq!(v.as_rational(), Some(&Rational::from(-2)));
        assert!(ExactReal::from_int(-2).sqrt().is_err());
    }

    #[test]
    fn inexact_sum_is_flagged() {
        let s = ExactReal::one().add(&ExactReal::pi());
        assert!(!s.is_exact());
        assert!((s.to_f64() - (1.0 + std::f64::consts::PI)).abs() < 1e-15);
        assert!(ExactReal::pi().add(&ExactReal::pi()).is_exact());
    }

    #[test]
    fn factor_small_and_large() {
        let f = factor(&Integer::from(360)).unwrap();
        assert_eq!(
            f,
            vec![(Integer::from(2), 3), (Integer::from(3), 2), (Integer::from(5), 1)]
        );
        let big_prime = Integer::from(1_000_000_007u64);
        let sq = Integer::from(&big_prime * &big_prime) * 6;
        let f = factor(&sq).unwrap();
        assert!(f.contains(&(big_prime, 2)));
    }

    #[test]
    fn reciprocal_of_zero_fails() {
        assert!(ExactReal::zero().recip().is_err());
    }
}
