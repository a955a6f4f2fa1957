//! Radial functions with derivative access of any supported order.

use std::fmt;
use std::sync::Arc;

use rug::Rational;

use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::jet::Jet;

/// The variable a profile is natively a smooth function of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    /// `v(r)`.
    Radius,
    /// `g(t)` with `t = r²`; smooth through the origin.
    RadiusSquared,
}

/// Taylor jets of a one-variable function in its native variable.
pub trait RadialFunction: Send + Sync + fmt::Debug {
    fn jet(&self, x: f64, order: usize) -> Jet;
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProfileKind {
    /// `c · log r`.
    Log,
    /// `c · r^s`.
    Power(Rational),
    /// Piecewise-smooth, differentiated in Taylor mode.
    Composite,
}

const SYMBOLIC_ORDER: usize = 64;

/// A radial function `v(|x|)` with jets up to `max_order`.
#[derive(Clone)]
pub struct RadialProfile {
    kind: ProfileKind,
    coeff: ExactReal,
    variable: Variable,
    max_order: usize,
    support: (f64, f64),
    breakpoints: Vec<f64>,
    func: Arc<dyn RadialFunction>,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("kind", &self.kind)
            .field("coeff", &self.coeff.to_string())
            .field("variable", &self.variable)
            .field("max_order", &self.max_order)
            .field("support", &self.support)
            .finish()
    }
}

#[derive(Debug)]
struct LogFn {
    c: f64,
}

impl RadialFunction for LogFn {
    fn jet(&self, r: f64, order: usize) -> Jet {
        let mut c = Vec::with_capacity(order + 1);
        c.push(self.c * r.ln());
        let mut p = 1.0;
        for k in 1..=order {
            p /= r;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            c.push(self.c * sign * p / k as f64);
        }
        Jet::from_coeffs(c)
    }
}

#[derive(Debug)]
struct PowerFn {
    s: f64,
    c: f64,
}

impl RadialFunction for PowerFn {
    fn jet(&self, r: f64, order: usize) -> Jet {
        // C(s, k) r^{s−k}
        let mut c = Vec::with_capacity(order + 1);
        let mut binom = self.c;
        let mut p = r.powf(self.s);
        for k in 0..=order {
            c.push(binom * p);
            binom *= (self.s - k as f64) / (k + 1) as f64;
            p /= r;
        }
        Jet::from_coeffs(c)
    }
}

#[derive(Debug)]
struct ScaledFn {
    inner: Arc<dyn RadialFunction>,
    c: f64,
}

impl RadialFunction for ScaledFn {
    fn jet(&self, x: f64, order: usize) -> Jet {
        self.inner.jet(x, order).scale(self.c)
    }
}

#[derive(Debug)]
struct LaplacianFn {
    inner: Arc<dyn RadialFunction>,
    dim: f64,
    variable: Variable,
}

impl RadialFunction for LaplacianFn {
    fn jet(&self, x: f64, order: usize) -> Jet {
        let v = self.inner.jet(x, order + 2);
        let d1 = v.derivative();
        let d2 = d1.derivative();
        let d1 = d1.truncate(order);
        match self.variable {
            Variable::Radius => {
                // v″ + (N − 1) v′ / r
                let rinv = Jet::variable(x.max(f64::MIN_POSITIVE), order).recip();
                &d2 + &(&d1 * &rinv).scale(self.dim - 1.0)
            }
            Variable::RadiusSquared => {
                // 4t g″ + 2N g′
                let t = Jet::variable(x, order);
                &(&t * &d2).scale(4.0) + &d1.scale(2.0 * self.dim)
            }
        }
    }
}

impl RadialProfile {
    /// `log r`.
    pub fn log() -> Self {
        Self::log_scaled(ExactReal::one())
    }

    pub fn log_scaled(coeff: ExactReal) -> Self {
        RadialProfile {
            kind: ProfileKind::Log,
            func: Arc::new(LogFn { c: coeff.to_f64() }),
            coeff,
            variable: Variable::Radius,
            max_order: SYMBOLIC_ORDER,
            support: (0.0, f64::INFINITY),
            breakpoints: Vec::new(),
        }
    }

    /// `r^s`.
    pub fn power(s: Rational) -> Self {
        Self::power_scaled(s, ExactReal::one())
    }

    pub fn power_scaled(s: Rational, coeff: ExactReal) -> Self {
        RadialProfile {
            func: Arc::new(PowerFn {
                s: s.to_f64(),
                c: coeff.to_f64(),
            }),
            kind: ProfileKind::Power(s),
            coeff,
            variable: Variable::Radius,
            max_order: SYMBOLIC_ORDER,
            support: (0.0, f64::INFINITY),
            breakpoints: Vec::new(),
        }
    }

    /// A piecewise-smooth profile; `breakpoints` are radii where smoothness drops.
    pub fn composite(
        variable: Variable,
        max_order: usize,
        support: (f64, f64),
        breakpoints: Vec<f64>,
        func: impl RadialFunction + 'static,
    ) -> Self {
        RadialProfile {
            kind: ProfileKind::Composite,
            coeff: ExactReal::one(),
            variable,
            max_order,
            support,
            breakpoints,
            func: Arc::new(func),
        }
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    /// Exact leading coefficient of a symbolic profile (1 for composites).
    pub fn coefficient(&self) -> &ExactReal {
        &self.coeff
    }

    pub fn variable(&self) -> Variable {
        self.variable
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn is_symbolic(&self) -> bool {
        self.kind != ProfileKind::Composite
    }

    /// Same kind and exactly equal coefficient.
    pub fn exact_eq(&self, other: &Self) -> Option<bool> {
        if !self.is_symbolic() || !other.is_symbolic() {
            return None;
        }
        if self.coeff.is_zero() && other.coeff.is_zero() {
            return Some(true);
        }
        if self.kind != other.kind {
            return Some(false);
        }
        self.coeff.exact_eq(&other.coeff)
    }

    pub fn scale(&self, c: &ExactReal) -> Self {
        let coeff = self.coeff.mul(c);
        match &self.kind {
            ProfileKind::Log => Self::log_scaled(coeff),
            ProfileKind::Power(s) => Self::power_scaled(s.clone(), coeff),
            ProfileKind::Composite => RadialProfile {
                func: Arc::new(ScaledFn {
                    inner: self.func.clone(),
                    c: c.to_f64(),
                }),
                ..self.clone()
            },
        }
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if order > self.max_order {
            return Err(Error::domain(format!(
                "derivative order {order} exceeds the profile's maximum {}",
                self.max_order
            )));
        }
        Ok(())
    }

    /// Jet in the native variable at radius `r`.
    pub fn native_jet(&self, r: f64, order: usize) -> Result<Jet> {
        self.check_order(order)?;
        let x = match self.variable {
            Variable::Radius => r,
            Variable::RadiusSquared => r * r,
        };
        Ok(self.func.jet(x, order))
    }

    /// Derivatives in the native variable: `v^{(j)}(r)` or `g^{(j)}(r²)`.
    pub fn native_derivatives(&self, r: f64, order: usize) -> Result<Vec<f64>> {
        Ok(self.native_jet(r, order)?.derivatives())
    }

    /// Jet of `r ↦ v(r)` at `r`.
    pub fn radial_jet(&self, r: f64, order: usize) -> Result<Jet> {
        let native = self.native_jet(r, order)?;
        Ok(match self.variable {
            Variable::Radius => native,
            Variable::RadiusSquared => {
                let x = Jet::variable(r, order);
                Jet::compose(&native, &(&x * &x))
            }
        })
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        Ok(self.native_jet(r, 0)?.value())
    }

    /// `[v(r), v′(r), …]` with respect to `r`.
    pub fn radial_derivatives(&self, r: f64, order: usize) -> Result<Vec<f64>> {
        Ok(self.radial_jet(r, order)?.derivatives())
    }
}

/// `Δv = v″ + (N − 1)v′/r` as a profile of two lower orders.
pub fn radial_laplacian(v: &RadialProfile, dim: u32) -> Result<RadialProfile> {
    if dim < 2 {
        return Err(Error::domain("dimension must be at least 2"));
    }
    let n = Rational::from(dim);
    match v.kind() {
        ProfileKind::Log => {
            let c = v.coefficient().scale(Rational::from(&n - 2u32));
            Ok(RadialProfile::power_scaled(Rational::from(-2), c))
        }
        ProfileKind::Power(s) => {
            // Δ r^s = s(s + N − 2) r^{s−2}
            let factor = s * (s.clone() + n - 2u32);
            let c = v.coefficient().scale(factor);
            Ok(RadialProfile::power_scaled(Rational::from(s - 2u32), c))
        }
        ProfileKind::Composite => {
            if v.max_order() < 2 {
                return Err(Error::domain("Laplacian needs a twice differentiable profile"));
            }
            Ok(RadialProfile {
                func: Arc::new(LaplacianFn {
                    inner: v.func.clone(),
                    dim: dim as f64,
                    variable: v.variable,
                }),
                max_order: v.max_order - 2,
                ..v.clone()
            })
        }
    }
}

/// `(−Δ)^j v`.
pub fn polyharmonic(v: &RadialProfile, j: u32, dim: u32) -> Result<RadialProfile> {
    let mut out = v.clone();
    let minus = ExactReal::from_int(-1);
    for _ in 0..j {
        out = radial_laplacian(&out, dim)?.scale(&minus);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bump::Smoothstep;

    #[derive(Debug)]
    struct Quartic;

    impl RadialFunction for Quartic {
        fn jet(&self, t: f64, order: usize) -> Jet {
            // g(t) = t², i.e. v(r) = r⁴
            let x = Jet::variable(t, order);
            &x * &x
        }
    }

    #[test]
    fn symbolic_laplacians() {
        let lap = radial_laplacian(&RadialProfile::log(), 3).unwrap();
        let expect = RadialProfile::power(Rational::from(-2));
        assert_eq!(lap.exact_eq(&expect), Some(true));

        let lap = radial_laplacian(&RadialProfile::power(Rational::from(2)), 5).unwrap();
        assert_eq!(lap.value(0.7).unwrap(), 10.0);

        let harmonic = radial_laplacian(&RadialProfile::power(Rational::from(-2)), 4).unwrap();
        assert!(harmonic.coefficient().is_zero());
    }

    #[test]
    fn composite_laplacian_both_variables() {
        let squared = RadialProfile::composite(Variable::RadiusSquared, 8, (0.0, 1.0), vec![], Quartic);
        // Δ r⁴ = 4(4 + N − 2) r² ; N = 3 → 20 r²
        let lap = radial_laplacian(&squared, 3).unwrap();
        assert!((lap.value(0.5).unwrap() - 5.0).abs() < 1e-14);
        assert!((lap.value(0.0).unwrap()).abs() < 1e-14);

        #[derive(Debug)]
        struct R4;
        impl RadialFunction for R4 {
            fn jet(&self, r: f64, order: usize) -> Jet {
                Jet::variable(r, order).powf(4.0)
            }
        }
        let plain = RadialProfile::composite(Variable::Radius, 8, (0.0, 1.0), vec![], R4);
        let lap = radial_laplacian(&plain, 3).unwrap();
        assert!((lap.value(0.5).unwrap() - 5.0).abs() < 1e-13);
        let bi = polyharmonic(&plain, 2, 3).unwrap();
        // Δ² r⁴ = 20·Δ r² = 20·6 = 120 in N = 3
        assert!((bi.value(0.3).unwrap() - 120.0).abs() < 1e-10);
        assert_eq!(bi.max_order(), 4);
        assert!(polyharmonic(&plain, 5, 3).is_err());
    }

    #[test]
    fn radial_jet_of_squared_variable() {
        #[derive(Debug)]
        struct Step(Smoothstep);
        impl RadialFunction for Step {
            fn jet(&self, t: f64, order: usize) -> Jet {
                self.0.jet(t, order)
            }
        }
        let p = RadialProfile::composite(Variable::RadiusSquared, 6, (0.0, 1.0), vec![], Step(Smoothstep::new(6)));
        let r = 0.6;
        let d = p.radial_derivatives(r, 2).unwrap();
        let g = p.native_derivatives(r, 2).unwrap();
        // d/dr g(r²) = 2r g′ ; d²/dr² = 2g′ + 4r² g″
        assert!((d[1] - 2.0 * r * g[1]).abs() < 1e-12);
        assert!((d[2] - (2.0 * g[1] + 4.0 * r * r * g[2])).abs() < 1e-11);
    }

    #[test]
    fn order_guard() {
        let p = RadialProfile::composite(Variable::RadiusSquared, 2, (0.0, 1.0), vec![], Quartic);
        assert!(p.native_jet(0.5, 3).is_err());
    }
}
