//! Quadrature engines.
//!
//! Double-exponential rules cover the half line, the real line and finite
//! intervals. A trapezoid rule handles even analytic integrands, Gauss-Legendre
//! panels handle long oscillatory stretches, and a trapezoid on a vertical line
//! evaluates Mellin-Barnes integrals. Every engine returns an error estimate
//! taken from successive refinement levels.

mod contour;
mod de;
mod gauss;

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Mul, Sub};

use crate::error::{Error, Result};

pub use contour::{
    integrate_contour, integrate_contour_multi, integrate_contour_with_hint, ContourSpec,
};
pub use de::{integrate_interval, integrate_real_line, integrate_semi_infinite};
pub use gauss::{gauss_kronrod15, gauss_legendre, integrate_panels};

pub(crate) const EPS: f64 = f64::EPSILON;

/// Values an integrand may return.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + AddAssign + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Tolerances and refinement budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_levels: usize,
    /// Safety factor applied to analytic tail bounds.
    pub truncation_margin: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-15,
            max_levels: 12,
            truncation_margin: 10.0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_levels: usize) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            max_levels,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        if !(self.truncation_margin >= 1.0) {
            return Err(Error::Domain("truncation_margin must be at least 1".into()));
        }
        if !(3..=20).contains(&self.max_levels) {
            return Err(Error::Domain(format!(
                "max_levels must lie in [3, 20] (got {})",
                self.max_levels
            )));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub(crate) fn accepts(&self, err: f64, value: f64, mass: f64) -> bool {
        err <= self
            .abs_tol
            .max(self.rel_tol * value)
            .max(64.0 * EPS * mass)
    }
}

/// Behaviour of an integrand at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// exp(-rate x)
    Exponential { rate: f64 },
    /// exp(-rate sqrt(x))
    SqrtExponential { rate: f64 },
    /// exp(-rate x^2)
    Gaussian { rate: f64 },
    /// x^{-exponent}
    Power { exponent: f64 },
}

/// Integral over (0, inf) using the decay descriptor to pick a substitution.
/// Square-root exponential decay is integrated in v with x = v^2 / 2.
pub fn integrate_function<V, F>(
    f: F,
    decay: Decay,
    spec: &QuadratureSpec,
) -> Result<crate::EvalResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    match decay {
        Decay::SqrtExponential { .. } => integrate_semi_infinite(|v| f(0.5 * v * v) * v, spec),
        _ => integrate_semi_infinite(f, spec),
    }
}

/// int_0^inf f(u) du for an even integrand analytic in a strip, by the
/// trapezoid rule with step halving.
///
/// `cutoff` fixes the truncation point; when absent the integrand is walked
/// outward with step `h0` until it stays below 1e-18 of its peak.
pub fn integrate_even_analytic<V, F>(
    f: F,
    h0: f64,
    cutoff: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<crate::EvalResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if !(h0 > 0.0) {
        return Err(Error::Domain("trapezoid step must be positive".into()));
    }
    let f0 = f(0.0);
    let upper = match cutoff {
        Some(u) => u,
        None => {
            let mut peak = f0.magnitude();
            let mut quiet = 0;
            let mut k = 0usize;
            loop {
                k += 1;
                let m = f(k as f64 * h0).magnitude();
                if !m.is_finite() {
                    return Err(Error::NonFinite { at: k as f64 * h0 });
                }
                peak = peak.max(m);
                if m <= 1e-18 * peak {
                    quiet += 1;
                    if quiet == 3 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                if k > 100_000 {
                    return Err(Error::TruncationInfeasible(
                        "integrand does not decay on the real line".into(),
                    ));
                }
            }
            k as f64 * h0
        }
    };
    let mut h = h0;
    let mut n = (upper / h).ceil().max(1.0) as usize;
    let mut raw = f0 * 0.5;
    let mut mass = f0.magnitude() * 0.5;
    for k in 1..=n {
        let v = f(k as f64 * h);
        raw += v;
        mass += v.magnitude();
    }
    let mut prev = raw * h;
    let mut prev_diff = f64::INFINITY;
    for _ in 1..spec.max_levels {
        h *= 0.5;
        n *= 2;
        for k in (1..n).step_by(2) {
            let v = f(k as f64 * h);
            raw += v;
            mass += v.magnitude();
        }
        let cur = raw * h;
        let diff = (cur - prev).magnitude();
        if !diff.is_finite() {
            return Err(Error::NonFinite { at: upper });
        }
        let predicted = if prev_diff.is_finite() && prev_diff > 0.0 {
            (diff * diff / prev_diff).min(diff)
        } else {
            diff
        };
        let err = predicted.max(4.0 * EPS * mass * h);
        if spec.accepts(err, cur.magnitude(), mass * h) {
            return Ok(crate::EvalResult {
                value: cur,
                err_est: err,
            });
        }
        prev = cur;
        prev_diff = diff;
    }
    Err(Error::NoConvergence {
        levels: spec.max_levels,
        last: prev.magnitude(),
        previous: prev.magnitude() + prev_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(1e-10, 1e-14, 2).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-14, 21).is_err());
        assert!(QuadratureSpec::new(0.0, 1e-14, 8).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-14, 8).is_ok());
    }

    #[test]
    fn even_trapezoid_gaussian() {
        let r = integrate_even_analytic(
            |u: f64| (-u * u).exp(),
            0.5,
            None,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((r.value - 0.5 * PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn even_trapezoid_sech() {
        // int_0^inf sech(u) cos(u) du = (pi / 2) sech(pi / 2)
        let r = integrate_even_analytic(
            |u: f64| u.cos() / u.cosh(),
            0.5,
            None,
            &QuadratureSpec::default(),
        )
        .unwrap();
        let exact = 0.5 * PI / (0.5 * PI).cosh();
        assert!((r.value - exact).abs() < 1e-13, "{} vs {exact}", r.value);
    }

    #[test]
    fn sqrt_exponential_substitution() {
        // int_0^inf e^{-sqrt(2x)} dx = 1
        let r = integrate_function(
            |x: f64| (-(2.0 * x).sqrt()).exp(),
            Decay::SqrtExponential { rate: 2f64.sqrt() },
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
    }
}
