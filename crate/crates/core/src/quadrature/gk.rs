use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and limits for adaptive quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub precision_bits: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            precision_bits: 113,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::domain("tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn with_abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    fn target(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

/// Outcome of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
    pub converged: bool,
}

impl IntegralResult {
    pub fn exact(value: f64) -> Self {
        IntegralResult {
            value,
            error_estimate: 0.0,
            subdivisions_used: 0,
            converged: true,
        }
    }

    /// Converts a non-converged result into [`Error::NonConvergence`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                value: self.value,
                error: self.error_estimate,
                subdivisions: self.subdivisions_used,
            })
        }
    }

    pub fn scale(self, c: f64) -> Self {
        IntegralResult {
            value: self.value * c,
            error_estimate: self.error_estimate * c.abs(),
            ..self
        }
    }

    pub fn combine(self, other: Self) -> Self {
        IntegralResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            subdivisions_used: self.subdivisions_used + other.subdivisions_used,
            converged: self.converged && other.converged,
        }
    }
}

/// Declared power behaviour `f ~ (x − a)^σ` at the left end of an interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndpointHint {
    pub sigma: f64,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_nan() {
            Err(Error::NaN { abscissa: x })
        } else {
            Ok(v)
        }
    };
    let fc = eval(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = eval(c - dx)? + eval(c + dx)?;
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kron * h;
    let diff = ((kron - gauss) * h).abs();
    // QUADPACK-style sharpening of the raw Kronrod–Gauss difference, floored
    // at rounding level.
    let err = if diff == 0.0 {
        0.0
    } else {
        let scaled = (200.0 * diff / value.abs().max(f64::MIN_POSITIVE)).powf(1.5);
        (value.abs() * scaled.min(1.0)).min(diff).max(50.0 * f64::EPSILON * value.abs())
    };
    Ok((value, err))
}

/// Globally adaptive G–K 7/15 over the consecutive intervals of `points`.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    cfg.validate()?;
    if points.len() < 2 {
        return Err(Error::domain("need at least two integration points"));
    }
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::domain("integration limits must be finite"));
        }
        if a == b {
            continue;
        }
        let (v, e) = gk15(&f, a, b)?;
        total += v;
        total_err += e;
        heap.push(Segment { a, b, value: v, error: e });
    }
    let mut subdivisions = 0;
    while total_err > cfg.target(total) && subdivisions < cfg.max_subdivisions {
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval cannot be split further in floating point.
            heap.push(Segment { error: 0.0, ..seg });
            total_err = heap.iter().map(|s| s.error).sum();
            continue;
        }
        let (v1, e1) = gk15(&f, seg.a, mid)?;
        let (v2, e2) = gk15(&f, mid, seg.b)?;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            // Re-sum to shed accumulated cancellation in the running totals.
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    total = heap.iter().map(|s| s.value).sum();
    total_err = heap.iter().map(|s| s.error).sum::<f64>().max(0.0);
    Ok(IntegralResult {
        value: total,
        error_estimate: total_err,
        subdivisions_used: subdivisions,
        converged: total_err <= cfg.target(total),
    })
}

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    if a > b {
        return integrate_1d(f, b, a, cfg).map(|r| r.scale(-1.0));
    }
    integrate_piecewise(f, &[a, b], cfg)
}

/// Adaptive integral with an integrable power singularity `(x − a)^σ`,
/// `σ ∈ (−1, 0)`, removed by the substitution `x − a = t^{1/(1+σ)}`.
pub fn integrate_1d_hinted<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    hint: EndpointHint,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let sigma = hint.sigma;
    if !(sigma > -1.0 && sigma < 0.0) {
        return integrate_1d(f, a, b, cfg);
    }
    if b <= a {
        return Err(Error::domain("hinted integration needs a < b"));
    }
    let q = 1.0 / (1.0 + sigma);
    let t_max = (b - a).powf(1.0 + sigma);
    integrate_1d(
        |t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            q * t.powf(q - 1.0) * f(a + t.powf(q))
        },
        0.0,
        t_max,
        cfg,
    )
}

/// Breakpoints `a = x_0 < … < x_n = b` spaced geometrically.
pub fn geometric_points(a: f64, b: f64, pieces: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a && pieces >= 1);
    let ratio = (b / a).ln() / pieces as f64;
    let mut pts: Vec<f64> = (0..=pieces).map(|i| a * (ratio * i as f64).exp()).collect();
    pts[0] = a;
    pts[pieces] = b;
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_integral() {
        let eps = 1e-6;
        let cfg = QuadratureConfig::default();
        let r = integrate_1d(|r| 1.0 / r, eps, 1.0, &cfg).unwrap();
        assert!(r.converged);
        assert!((r.value - (1.0 / eps).ln()).abs() < 1e-9);
    }

    #[test]
    fn polynomial_moment() {
        let cfg = QuadratureConfig::default();
        for n in 2..8 {
            let r = integrate_1d(|r: f64| r.powi(n - 1), 0.0, 1.0, &cfg).unwrap();
            assert!((r.value - 1.0 / n as f64).abs() < 1e-14);
            assert_eq!(r.subdivisions_used, 0);
        }
    }

    #[test]
    fn log_power_integral() {
        let eps: f64 = 1e-4;
        let p = 1.5;
        let cfg = QuadratureConfig::default();
        let pts = geometric_points(eps, 1.0, 8);
        let r = integrate_piecewise(|r: f64| (1.0 / r).ln().powf(p) / r, &pts, &cfg).unwrap();
        let exact = (1.0 / eps).ln().powf(p + 1.0) / (p + 1.0);
        assert!(r.converged);
        assert!((r.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn hinted_singularity() {
        let cfg = QuadratureConfig::default();
        let r = integrate_1d_hinted(|x: f64| x.powf(-0.5), 0.0, 1.0, EndpointHint { sigma: -0.5 }, &cfg)
            .unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nan_is_reported() {
        let cfg = QuadratureConfig::default();
        let err = integrate_1d(|x: f64| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, &cfg);
        assert!(matches!(err, Err(Error::NaN { .. })));
    }

    #[test]
    fn non_convergence_is_flagged() {
        let cfg = QuadratureConfig {
            max_subdivisions: 3,
            ..QuadratureConfig::default()
        };
        let r = integrate_1d(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.require_converged().is_err());
    }
}
