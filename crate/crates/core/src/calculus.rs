//! Symbolic gradient-tensor identities for radial functions.
//!
//! The tensor norm of `∇^k v(|x|)` is rotation invariant, so every norm is
//! evaluated at the axis point `(r, 0, …, 0)`.

use rug::Rational;

use crate::constants::lambda_rational;
use crate::error::{Error, Result};
use crate::profile::{RadialProfile, Variable};
use crate::symbolic::{
    gradient_tensor, BaseKind, CompiledNorm, SymbolicLimits, TensorField, TermSum,
};

pub use crate::profile::{polyharmonic, radial_laplacian};

/// `|T(r e_1)|²` for a tensor built from a concrete base.
pub fn norm_sq_on_axis(t: &TensorField, r: &Rational) -> Result<Rational> {
    if !t.base().is_concrete() {
        return Err(Error::domain(
            "abstract base: supply derivative values through AxisNorm::compile",
        ));
    }
    t.axis_norm().eval_exact(r)
}

fn check_dim(dim: u32) -> Result<usize> {
    if dim < 2 {
        return Err(Error::domain("dimension must be at least 2"));
    }
    Ok(dim as usize)
}

/// `|∇^m log r|²` at `r = 1`, computed symbolically.
pub fn ell_oracle(dim: u32, m: u32) -> Result<Rational> {
    ell_oracle_with(dim, m, SymbolicLimits::default())
}

pub fn ell_oracle_with(dim: u32, m: u32, limits: SymbolicLimits) -> Result<Rational> {
    if m == 0 {
        return Err(Error::domain("order m must be at least 1"));
    }
    let t = gradient_tensor(check_dim(dim)?, BaseKind::Log, m as usize, limits)?;
    norm_sq_on_axis(&t, &Rational::from(1))
}

/// `|∇^m r^s|²` at `r = 1`, computed symbolically.
pub fn lambda_oracle(dim: u32, s: &Rational, m: u32) -> Result<Rational> {
    lambda_oracle_with(dim, s, m, SymbolicLimits::default())
}

pub fn lambda_oracle_with(
    dim: u32,
    s: &Rational,
    m: u32,
    limits: SymbolicLimits,
) -> Result<Rational> {
    if m == 0 {
        return Err(Error::domain("order m must be at least 1"));
    }
    let t = gradient_tensor(
        check_dim(dim)?,
        BaseKind::Power(s.clone()),
        m as usize,
        limits,
    )?;
    norm_sq_on_axis(&t, &Rational::from(1))
}

/// `(−1)^k div_k(|x|^{2α−N} ∇^k |x|^{k−α}) − rhs_scale · λ_N^{k−α,k} |x|^{α−N−k}`
/// as a canonical [`TermSum`]; the identity holds iff this is empty at
/// `rhs_scale = 1`.
pub fn divk_power_residual(dim: u32, k: u32, alpha: &Rational, rhs_scale: &Rational) -> Result<TermSum> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let n = check_dim(dim)?;
    let s = Rational::from(k) - alpha;
    let base = BaseKind::Power(s.clone());
    let grad = gradient_tensor(n, base.clone(), k as usize, SymbolicLimits::default())?;
    let weight = Rational::from(alpha * 2u32) - dim;
    let mut lhs = grad.mul_radial_power(&weight).div_full()?;
    if k % 2 == 1 {
        lhs = lhs.scale(&Rational::from(-1));
    }
    let lambda = lambda_rational(dim, &s, k)? * rhs_scale;
    // |x|^{−(N−α+k)} = r^{−p} with p = N − α + k
    let p = Rational::from(dim + k) - alpha;
    let rhs = TermSum::radial_monomial(n, base, lambda, p);
    Ok(lhs.sub(&rhs))
}

/// Symbolic check of `(−1)^k div_k(|x|^{2α−N}∇^k(1/|x|^{α−k})) = λ_N^{k−α,k}/|x|^{N−α+k}`.
pub fn verify_divk_identity_power(dim: u32, k: u32, alpha: &Rational) -> Result<bool> {
    if alpha <= &Rational::from(k) {
        return Err(Error::domain("alpha must exceed k"));
    }
    Ok(divk_power_residual(dim, k, alpha, &Rational::from(1))?.is_zero())
}

/// `(−1)^k div_k(|x|^{w} ∇^k log|x|)` as a canonical [`TermSum`].
pub fn divk_log_residual(dim: u32, k: u32, weight_exponent: &Rational) -> Result<TermSum> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let n = check_dim(dim)?;
    let grad = gradient_tensor(n, BaseKind::Log, k as usize, SymbolicLimits::default())?;
    let mut div = grad.mul_radial_power(weight_exponent).div_full()?;
    if k % 2 == 1 {
        div = div.scale(&Rational::from(-1));
    }
    Ok(div)
}

/// Symbolic check that `div_k(|x|^{2k−N}∇^k log|x|)` vanishes away from 0.
pub fn verify_divk_identity_log(dim: u32, k: u32) -> Result<bool> {
    let w = Rational::from(2 * k as i64 - dim as i64);
    Ok(divk_log_residual(dim, k, &w)?.is_zero())
}

/// Evaluates `|∇^k v|` for radial profiles through the symbolic axis form
/// of `∇^k` applied to an abstract base.
#[derive(Clone, Debug)]
pub struct GradientNorm {
    order: usize,
    variable: Variable,
    norm: CompiledNorm,
}

impl GradientNorm {
    pub fn new(dim: u32, order: usize, variable: Variable) -> Result<Self> {
        let base = match variable {
            Variable::Radius => BaseKind::Abstract,
            Variable::RadiusSquared => BaseKind::AbstractSquared,
        };
        let t = gradient_tensor(check_dim(dim)?, base, order, SymbolicLimits::default())?;
        Ok(GradientNorm {
            order,
            variable,
            norm: t.axis_norm().compile(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn derivs(&self, v: &RadialProfile, r: f64) -> Result<Vec<f64>> {
        if v.variable() != self.variable {
            return Err(Error::domain("profile variable does not match the evaluator"));
        }
        v.native_derivatives(r, self.order)
    }

    pub fn norm_sq(&self, v: &RadialProfile, r: f64) -> Result<f64> {
        Ok(self.norm.norm_sq(r, &self.derivs(v, r)?))
    }

    /// `|∇^k v|(r)`.
    pub fn norm(&self, v: &RadialProfile, r: f64) -> Result<f64> {
        Ok(self.norm_sq(v, r)?.max(0.0).sqrt())
    }

    /// `∇^k a · ∇^k b` at radius `r`.
    pub fn inner(&self, a: &RadialProfile, b: &RadialProfile, r: f64) -> Result<f64> {
        Ok(self.norm.inner(r, &self.derivs(a, r)?, &self.derivs(b, r)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ell_rational;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn gradient_norm_of_log_matches_ell() {
        for (n, k) in [(3u32, 2usize), (4, 3), (5, 2)] {
            let g = GradientNorm::new(n, k, Variable::Radius).unwrap();
            let ell = ell_rational(n, k as u32).unwrap().to_f64();
            for r in [0.3, 1.0, 2.5] {
                let v = g.norm_sq(&RadialProfile::log(), r).unwrap();
                let expect = ell / r.powi(2 * k as i32);
                assert!((v - expect).abs() < 1e-12 * expect, "N={n} k={k} r={r}");
            }
        }
    }

    #[test]
    fn polyharmonic_log_matches_closed_form() {
        use crate::constants::{riesz_gamma, sphere_area};
        for n in 3..=9u32 {
            for j in 1..=((n - 1) / 2) {
                let p = polyharmonic(&RadialProfile::log(), j, n).unwrap();
                let c = riesz_gamma(n, &Rational::from(2 * j))
                    .unwrap()
                    .div(&sphere_area(n).unwrap())
                    .unwrap()
                    .neg();
                let expect = RadialProfile::power_scaled(Rational::from(-2 * j as i64), c);
                assert_eq!(p.exact_eq(&expect), Some(true), "N={n} j={j}");
            }
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(ell_oracle(2, 1).unwrap(), 1);
        assert_eq!(ell_oracle(4, 2).unwrap(), 4);
        assert_eq!(ell_oracle(3, 2).unwrap(), 3);
        assert_eq!(lambda_oracle(4, &q(-2, 1), 2).unwrap(), 48);
        assert_eq!(lambda_oracle(5, &q(2, 1), 1).unwrap(), 4);
        assert_eq!(lambda_oracle(3, &q(7, 3), 1).unwrap(), q(49, 9));
    }

    #[test]
    fn ell_3_3_is_frozen() {
        assert_eq!(ell_oracle(3, 3).unwrap(), ell_rational(3, 3).unwrap());
        assert_eq!(ell_oracle(3, 3).unwrap(), 28);
    }

    #[test]
    fn norm_scales_with_radius() {
        let t = gradient_tensor(3, BaseKind::Log, 3, SymbolicLimits::default()).unwrap();
        let at1 = norm_sq_on_axis(&t, &q(1, 1)).unwrap();
        for r in [q(2, 1), q(5, 3)] {
            let v = norm_sq_on_axis(&t, &r).unwrap();
            let r6 = rug::ops::Pow::pow(r.clone(), 6u32);
            assert_eq!(v * r6, at1);
        }
    }

    #[test]
    fn abstract_norm_needs_values() {
        let t = gradient_tensor(3, BaseKind::Abstract, 1, SymbolicLimits::default()).unwrap();
        assert!(norm_sq_on_axis(&t, &q(1, 1)).is_err());
    }

    #[test]
    fn divergence_of_log_gradient_is_laplacian() {
        for dim in 2..=5u32 {
            let g = gradient_tensor(dim as usize, BaseKind::Log, 1, SymbolicLimits::default())
                .unwrap();
            let lap = g.div_full().unwrap();
            let expect = TermSum::radial_monomial(
                dim as usize,
                BaseKind::Log,
                Rational::from(dim as i64 - 2),
                Rational::from(2),
            );
            assert_eq!(lap, expect);
        }
    }

    #[test]
    fn power_identity_and_negative_control() {
        assert!(verify_divk_identity_power(4, 1, &q(2, 1)).unwrap());
        assert!(verify_divk_identity_power(6, 2, &q(4, 1)).unwrap());
        assert!(!divk_power_residual(6, 2, &q(4, 1), &q(2, 1)).unwrap().is_zero());
    }

    #[test]
    fn log_identity_and_negative_control() {
        assert!(verify_divk_identity_log(2, 1).unwrap());
        assert!(verify_divk_identity_log(4, 2).unwrap());
        assert!(!divk_log_residual(4, 2, &q(1, 1)).unwrap().is_zero());
    }
}
