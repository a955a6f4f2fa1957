//! Riesz potentials of radial functions and pointwise potential bounds.

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use crate::calculus::GradientNorm;
use crate::constants::{ell_constant, lambda_constant, log_fundamental_coeff, riesz_gamma, sphere_area};
use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::profile::{polyharmonic, RadialProfile};
use crate::quadrature::{
    integrate_piecewise, integrate_radial_l1, riesz_sphere_kernel, IntegralResult,
    QuadratureConfig, RadialOptions,
};

fn rational_of(x: f64) -> Result<Rational> {
    Rational::from_f64(x).ok_or_else(|| Error::domain("non-finite parameter"))
}

/// `γ(α)` as a float for any `α ∈ (0, N)`.
pub fn riesz_gamma_f64(dim: u32, alpha: f64) -> Result<f64> {
    Ok(riesz_gamma(dim, &rational_of(alpha)?)?.to_f64())
}

/// Radial function to be integrated against the Riesz kernel.
pub struct RadialDensity<'a> {
    pub f: &'a (dyn Fn(f64) -> f64 + Sync),
    /// `f` vanishes beyond this radius; `f64::INFINITY` for decaying densities.
    pub support: f64,
    pub breakpoints: Vec<f64>,
}

/// `I_α f(r) = γ(α)^{−1} ∫_0^∞ f(ρ) ρ^{N−1} K(r, ρ) dρ` with the sphere kernel `K`.
pub fn riesz_radial_density(
    density: &RadialDensity<'_>,
    alpha: f64,
    dim: u32,
    r: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let gamma = riesz_gamma_f64(dim, alpha)?;
    let n1 = (dim - 1) as i32;
    let failure = std::sync::Mutex::new(None::<Error>);
    let integrand = |rho: f64| -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        let v = (density.f)(rho);
        if v == 0.0 {
            return 0.0;
        }
        match riesz_sphere_kernel(dim, alpha, r, rho, cfg) {
            Ok(k) => v * rho.powi(n1) * k,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                0.0
            }
        }
    };
    let finite = density.support.is_finite();
    let outer = if finite { density.support } else { (2.0 * r).max(1.0) };
    let mut pts = vec![0.0];
    pts.extend(density.breakpoints.iter().copied().filter(|&b| b > 0.0 && b < outer));
    if r > 0.0 && r < outer {
        pts.push(r);
    }
    pts.push(outer);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut res = integrate_piecewise(integrand, &pts, cfg)?;
    if !finite {
        // ρ = outer/u maps [outer, ∞) onto (0, 1].
        let tail = integrate_piecewise(
            |u: f64| {
                if u <= 0.0 {
                    0.0
                } else {
                    integrand(outer / u) * outer / (u * u)
                }
            },
            &[0.0, 1.0],
            cfg,
        )?;
        res = res.combine(tail);
    }
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(res.scale(1.0 / gamma))
}

/// `I_α g(r)` for a profile supported in `[0, support]`.
pub fn riesz_radial(
    g: &RadialProfile,
    alpha: f64,
    dim: u32,
    r: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let f = |rho: f64| g.value(rho).unwrap_or(f64::NAN);
    let density = RadialDensity {
        f: &f,
        support: g.support().1,
        breakpoints: g.breakpoints().to_vec(),
    };
    let res = riesz_radial_density(&density, alpha, dim, r, cfg)?.require_converged()?;
    Ok(res.value)
}

/// `(−Δ)^{m/2} log|x| = −(γ(m)/ω_{N−1}) |x|^{−m}`.
pub fn frac_lap_log(dim: u32, m: &Rational) -> Result<RadialProfile> {
    if m.cmp0() != std::cmp::Ordering::Greater || *m >= dim {
        return Err(Error::domain("order m must lie in (0, N)"));
    }
    let c = riesz_gamma(dim, m)?.div(&sphere_area(dim)?)?.neg();
    Ok(RadialProfile::power_scaled(Rational::from(-m), c))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointwiseSample {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointwiseReport {
    pub dim: u32,
    pub m: u32,
    pub k: u32,
    pub constant: f64,
    pub tolerance: f64,
    pub samples: Vec<PointwiseSample>,
    pub min_margin: f64,
    pub passed: bool,
}

/// Tolerance on `rhs − lhs` used by the pointwise checks.
pub const POINTWISE_TOLERANCE: f64 = 1e-8;

/// Geometric grid of `count` radii spanning `[support·10⁻³, support]`.
pub fn default_sample_radii(support: f64, count: usize) -> Vec<f64> {
    let lo = support * 1e-3;
    if count <= 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo * (support / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

fn pointwise(
    u: &RadialProfile,
    w: &RadialProfile,
    order: usize,
    alpha: u32,
    dim: u32,
    constant: f64,
    radii: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<PointwiseSample>> {
    let grad = GradientNorm::new(dim, order, w.variable())?;
    let f = |rho: f64| grad.norm(w, rho).unwrap_or(f64::NAN);
    let density = RadialDensity {
        f: &f,
        support: w.support().1,
        breakpoints: w.breakpoints().to_vec(),
    };
    radii
        .par_iter()
        .map(|&r| {
            let lhs = u.value(r)?.abs();
            let pot = riesz_radial_density(&density, alpha as f64, dim, r, cfg)?.require_converged()?;
            let rhs = constant * pot.value;
            Ok(PointwiseSample {
                lhs,
                rhs,
                margin: rhs - lhs,
                radius: r,
            })
        })
        .collect()
}

fn report(dim: u32, m: u32, k: u32, constant: f64, samples: Vec<PointwiseSample>) -> PointwiseReport {
    let min_margin = samples.iter().map(|s| s.margin).fold(f64::INFINITY, f64::min);
    PointwiseReport {
        dim,
        m,
        k,
        constant,
        tolerance: POINTWISE_TOLERANCE,
        passed: samples.iter().all(|s| s.margin >= -POINTWISE_TOLERANCE),
        samples,
        min_margin,
    }
}

/// `|u(x)| ≤ γ(m)/(√ℓ_N^m ω_{N−1}) · I_m(|∇^m u|)(x)` at the sample radii.
pub fn check_endpoint_pointwise(
    u: &RadialProfile,
    m: u32,
    dim: u32,
    radii: &[f64],
    cfg: &QuadratureConfig,
) -> Result<PointwiseReport> {
    if m == 0 || m >= dim {
        return Err(Error::domain("need 1 <= m < N"));
    }
    let c = riesz_gamma(dim, &Rational::from(m))?
        .div(&ell_constant(dim, m)?.sqrt()?)?
        .div(&sphere_area(dim)?)?
        .to_f64();
    let samples = pointwise(u, u, m as usize, m, dim, c, radii, cfg)?;
    Ok(report(dim, m, m, c, samples))
}

/// `|u(x)| ≤ γ(m)/(γ(m−k)√λ_N^{k−m,k}) · I_m|∇^k(−Δ)^{(m−k)/2}u|(x)` for even `m − k`.
pub fn check_intermediate_pointwise(
    u: &RadialProfile,
    m: u32,
    k: u32,
    dim: u32,
    radii: &[f64],
    cfg: &QuadratureConfig,
) -> Result<PointwiseReport> {
    if m >= dim || k == 0 || k >= m {
        return Err(Error::domain("need 1 <= k <= m - 1 and m < N"));
    }
    if (m - k) % 2 != 0 {
        return Err(Error::domain("only even m - k (local operator) is supported"));
    }
    let gap = Rational::from(m - k);
    let lambda = lambda_constant(dim, &(-(gap.clone())), k)?;
    let c = riesz_gamma(dim, &Rational::from(m))?
        .div(&riesz_gamma(dim, &gap)?.mul(&lambda.sqrt()?))?
        .to_f64();
    let w = polyharmonic(u, (m - k) / 2, dim)?;
    let samples = pointwise(u, &w, k as usize, m, dim, c, radii, cfg)?;
    Ok(report(dim, m, k, c, samples))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FundamentalReport {
    pub dim: u32,
    pub integral: f64,
    pub value_at_origin: f64,
    pub rel_error: f64,
    pub converged: bool,
}

/// `c_N ∫ log(1/|y|) (−Δ)^{N/2} v(y) dy` against `v(0)` for even `N`.
pub fn log_fundamental_check(
    dim: u32,
    v: &RadialProfile,
    cfg: &QuadratureConfig,
) -> Result<FundamentalReport> {
    if dim % 2 != 0 || dim < 2 {
        return Err(Error::domain("N must be even"));
    }
    let c = log_fundamental_coeff(dim)?.to_f64();
    let lap = polyharmonic(v, dim / 2, dim)?;
    let opts = RadialOptions {
        breakpoints: v.breakpoints().to_vec(),
        origin_exponent: None,
    };
    let res = integrate_radial_l1(
        |r| {
            if r <= 0.0 {
                return 0.0;
            }
            -r.ln() * lap.value(r).unwrap_or(f64::NAN)
        },
        dim,
        v.support().1,
        &opts,
        cfg,
    )?;
    let integral = c * res.value;
    let v0 = v.value(0.0)?;
    let rel_error = if v0 == 0.0 {
        integral.abs()
    } else {
        ((integral - v0) / v0).abs()
    };
    Ok(FundamentalReport {
        dim,
        integral,
        value_at_origin: v0,
        rel_error,
        converged: res.converged,
    })
}

/// Exact coefficient `γ(m)/ω_{N−1}` of [`frac_lap_log`], up to sign.
pub fn frac_lap_log_coefficient(dim: u32, m: &Rational) -> Result<ExactReal> {
    Ok(frac_lap_log(dim, m)?.coefficient().neg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bump::TestBump;
    use crate::profile::{RadialFunction, Variable};
    use crate::jet::Jet;

    #[derive(Debug)]
    struct Indicator;
    impl RadialFunction for Indicator {
        fn jet(&self, r: f64, order: usize) -> Jet {
            Jet::constant(if r <= 1.0 { 1.0 } else { 0.0 }, order)
        }
    }

    #[test]
    fn newtonian_potential_of_ball() {
        let g = RadialProfile::composite(Variable::Radius, 0, (0.0, 1.0), vec![], Indicator);
        let cfg = QuadratureConfig::default();
        let v = riesz_radial(&g, 2.0, 3, 2.0, &cfg).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-9, "{v}");
        let v2 = riesz_radial(&g.scale(&ExactReal::from_int(2)), 2.0, 3, 2.0, &cfg).unwrap();
        assert!((v2 - 2.0 * v).abs() < 1e-12);
    }

    #[test]
    fn frac_lap_log_examples() {
        let p = frac_lap_log(3, &Rational::from(2)).unwrap();
        assert_eq!(p.exact_eq(&RadialProfile::power_scaled(Rational::from(-2), ExactReal::from_int(-1))), Some(true));
        let p = frac_lap_log(2, &Rational::from(1)).unwrap();
        assert_eq!(p.coefficient().as_rational(), Some(&Rational::from(-1)));
        let even = crate::profile::polyharmonic(&RadialProfile::log(), 2, 6).unwrap();
        assert_eq!(frac_lap_log(6, &Rational::from(4)).unwrap().exact_eq(&even), Some(true));
    }

    #[test]
    fn fundamental_solution_weakly() {
        let cfg = QuadratureConfig::default();
        for n in [2u32, 4] {
            for b in TestBump::random_suite(11, 2, n + 2) {
                let rep = log_fundamental_check(n, &b.profile(), &cfg).unwrap();
                assert!(rep.rel_error < 1e-8, "N={n}: {rep:?}");
            }
        }
    }

    #[test]
    fn endpoint_bound_holds_for_a_bump() {
        let cfg = QuadratureConfig::default().with_rel_tol(1e-9);
        let b = &TestBump::random_suite(3, 1, 5)[0];
        let radii = default_sample_radii(b.support_radius(), 6);
        let rep = check_endpoint_pointwise(&b.profile(), 1, 3, &radii, &cfg).unwrap();
        assert!(rep.passed, "{rep:?}");
    }
}
