//! Adaptive quadrature, radial reductions over ℝ^N and log-domain
//! exponential integrals.

mod gk;
pub mod mp;

pub use gk::{
    geometric_points, integrate_1d, integrate_1d_hinted, integrate_piecewise, EndpointHint,
    IntegralResult, QuadratureConfig,
};

use serde::Serialize;

use crate::constants::sphere_area;
use crate::error::{Error, Result};

/// `ω_{d−1}`, the area of the unit sphere in ℝ^d, as a float (`d ≥ 1`).
pub fn sphere_area_f64(d: u32) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        _ => sphere_area(d).expect("dimension >= 2").to_f64(),
    }
}

/// Where a radial integrand needs care.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RadialOptions {
    /// Interior radii where the integrand is not smooth.
    pub breakpoints: Vec<f64>,
    /// Power behaviour `g(r) ~ r^σ` of the radial function at the origin.
    pub origin_exponent: Option<f64>,
}

/// `∫_{B_{r_max}} g(|x|) dx = ω_{N−1} ∫_0^{r_max} g(r) r^{N−1} dr`.
pub fn integrate_radial_l1<G: Fn(f64) -> f64>(
    g: G,
    dim: u32,
    r_max: f64,
    opts: &RadialOptions,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    if dim < 2 {
        return Err(Error::domain("dimension must be at least 2"));
    }
    if !(r_max > 0.0) {
        return Err(Error::domain("r_max must be positive"));
    }
    let omega = sphere_area_f64(dim);
    let n1 = (dim - 1) as i32;
    let integrand = |r: f64| {
        let v = g(r);
        if v == 0.0 {
            0.0
        } else {
            v * r.powi(n1)
        }
    };
    let mut pts = vec![0.0];
    pts.extend(opts.breakpoints.iter().copied().filter(|&b| b > 0.0 && b < r_max));
    pts.push(r_max);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let sigma = opts.origin_exponent.map(|s| s + (dim - 1) as f64);
    let result = match sigma {
        Some(s) if s > -1.0 && s < 0.0 => {
            let first = integrate_1d_hinted(integrand, pts[0], pts[1], EndpointHint { sigma: s }, cfg)?;
            if pts.len() > 2 {
                first.combine(integrate_piecewise(integrand, &pts[1..], cfg)?)
            } else {
                first
            }
        }
        _ => integrate_piecewise(integrand, &pts, cfg)?,
    };
    Ok(result.scale(omega))
}

/// `∫_{S^{N−1}} |r e_1 − ρθ|^{α−N} dσ(θ)`, reduced to the polar angle.
pub fn riesz_sphere_kernel(
    dim: u32,
    alpha: f64,
    r: f64,
    rho: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if dim < 2 {
        return Err(Error::domain("dimension must be at least 2"));
    }
    let n = dim as f64;
    if !(alpha > 0.0 && alpha < n) {
        return Err(Error::domain("alpha must lie in (0, N)"));
    }
    if !(r >= 0.0 && rho >= 0.0) || (r == 0.0 && rho == 0.0) {
        return Err(Error::domain("radii must be non-negative and not both zero"));
    }
    if r == rho && alpha <= 1.0 {
        return Err(Error::domain("kernel diverges at r = rho for alpha <= 1"));
    }
    let omega = sphere_area_f64(dim - 1);
    let e = 0.5 * (alpha - n);
    let diff2 = (r - rho) * (r - rho);
    let prod4 = 4.0 * r * rho;
    let n2 = (dim - 2) as i32;
    let f = |theta: f64| {
        let s = (0.5 * theta).sin();
        let d2 = diff2 + prod4 * s * s;
        d2.powf(e) * theta.sin().powi(n2)
    };
    let value = if r == rho {
        integrate_1d_hinted(f, 0.0, std::f64::consts::PI, EndpointHint { sigma: alpha - 2.0 }, cfg)?
    } else {
        let scale = (r - rho).abs() / (r * rho).sqrt().max(f64::MIN_POSITIVE);
        let mut pts = vec![0.0];
        let mut t = scale;
        while t < std::f64::consts::PI && pts.len() < 40 {
            pts.push(t);
            t *= 4.0;
        }
        pts.push(std::f64::consts::PI);
        integrate_piecewise(f, &pts, cfg)?
    };
    if !value.converged {
        return Err(Error::NonConvergence {
            value: value.value,
            error: value.error_estimate,
            subdivisions: value.subdivisions_used,
        });
    }
    Ok(omega * value.value)
}

/// An integral carried as its logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogIntegral {
    pub log_value: f64,
    /// Relative error estimate of the underlying (shifted) integral.
    pub rel_error: f64,
    pub converged: bool,
    /// The exponent left the representable range.
    pub saturated: bool,
}

/// `log ∫ exp(h(x)) dx` over the consecutive intervals of `points`, shifting
/// by the sampled maximum of `h` so nothing overflows.
pub fn log_exp_integral<H: Fn(f64) -> f64>(
    h: H,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<LogIntegral> {
    const SAMPLES: usize = 64;
    let mut shift = f64::NEG_INFINITY;
    for w in points.windows(2) {
        for i in 0..=SAMPLES {
            let x = w[0] + (w[1] - w[0]) * (i as f64 + 0.5) / (SAMPLES as f64 + 1.0);
            let v = h(x);
            if v.is_nan() {
                return Err(Error::NaN { abscissa: x });
            }
            shift = shift.max(v);
        }
    }
    if shift == f64::INFINITY || shift > 1e300 {
        return Ok(LogIntegral {
            log_value: f64::INFINITY,
            rel_error: f64::INFINITY,
            converged: false,
            saturated: true,
        });
    }
    if shift == f64::NEG_INFINITY {
        return Ok(LogIntegral {
            log_value: f64::NEG_INFINITY,
            rel_error: 0.0,
            converged: true,
            saturated: false,
        });
    }
    let res = integrate_piecewise(|x| (h(x) - shift).exp(), points, &cfg.with_abs_tol(f64::MIN_POSITIVE))?;
    Ok(LogIntegral {
        log_value: shift + res.value.ln(),
        rel_error: res.error_estimate / res.value.abs(),
        converged: res.converged,
        saturated: false,
    })
}

/// `log(ω_{N−1} ∫_ε^{2ε} exp(E(r)) r^{N−1} dr)` in the log domain.
pub fn annulus_exp_integral<E: Fn(f64) -> f64>(
    dim: u32,
    exponent: E,
    eps: f64,
    cfg: &QuadratureConfig,
) -> Result<LogIntegral> {
    if dim < 2 || !(eps > 0.0) {
        return Err(Error::domain("need N >= 2 and eps > 0"));
    }
    let log_omega = sphere_area_f64(dim).ln();
    let n1 = (dim - 1) as f64;
    log_exp_integral(|r| exponent(r) + n1 * r.ln() + log_omega, &[eps, 2.0 * eps], cfg)
}
