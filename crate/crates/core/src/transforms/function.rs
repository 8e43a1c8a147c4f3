use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::Decay;

/// A real function on the half line (or the real line) with the metadata the
/// quadratures need: behaviour x^a at the origin and decay at infinity.
#[derive(Clone)]
pub struct SampledFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub zero_exponent: f64,
    pub decay: Decay,
    /// Points where |f| has a kink (sign changes). Norms split there.
    pub breakpoints: Vec<f64>,
}

impl fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledFunction")
            .field("zero_exponent", &self.zero_exponent)
            .field("decay", &self.decay)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl SampledFunction {
    pub fn new<F>(f: F, zero_exponent: f64, decay: Decay) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            zero_exponent,
            decay,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, mut points: Vec<f64>) -> Self {
        points.sort_by(|a, b| a.total_cmp(b));
        self.breakpoints = points;
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// a f
    pub fn scaled(&self, a: f64) -> Self {
        let inner = self.eval.clone();
        Self {
            eval: Arc::new(move |x| a * inner(x)),
            zero_exponent: self.zero_exponent,
            decay: self.decay,
            breakpoints: self.breakpoints.clone(),
        }
    }

    /// a f + b h. Metadata is taken from the slower-decaying operand.
    pub fn combine(a: f64, f: &Self, b: f64, h: &Self) -> Self {
        let (fe, he) = (f.eval.clone(), h.eval.clone());
        let decay = if decay_rank(f.decay) <= decay_rank(h.decay) {
            f.decay
        } else {
            h.decay
        };
        Self {
            eval: Arc::new(move |x| a * fe(x) + b * he(x)),
            zero_exponent: f.zero_exponent.min(h.zero_exponent),
            decay,
            breakpoints: Vec::new(),
        }
    }
}

fn decay_rank(d: Decay) -> u8 {
    match d {
        Decay::Power { .. } => 0,
        Decay::SqrtExponential { .. } => 1,
        Decay::Exponential { .. } => 2,
        Decay::Gaussian { .. } => 3,
    }
}

/// f(x) = (1 - x) e^{-x}: zero mean, Mellin transform Gamma(s)(1 - s).
pub fn canonical_f() -> SampledFunction {
    SampledFunction::new(
        |x| (1.0 - x) * (-x).exp(),
        0.0,
        Decay::Exponential { rate: 1.0 },
    )
    .with_breakpoints(vec![1.0])
}

/// Mellin transform of [`canonical_f`].
pub fn canonical_f_mellin(s: num_complex::Complex64) -> num_complex::Complex64 {
    match crate::specfun::log_gamma(s) {
        Ok(l) => l.exp() * (1.0 - s),
        Err(_) => num_complex::Complex64::new(f64::NAN, 0.0),
    }
}

/// g(tau) = tau^2 e^{-tau^2}.
pub fn canonical_g() -> SampledFunction {
    SampledFunction::new(
        |t| t * t * (-t * t).exp(),
        2.0,
        Decay::Gaussian { rate: 1.0 },
    )
}

/// Fourier transform (1/sqrt(2 pi)) int g(tau) e^{i tau t} dtau of [`canonical_g`].
pub fn canonical_g_fourier(t: f64) -> num_complex::Complex64 {
    let v = std::f64::consts::FRAC_1_SQRT_2 * (-0.25 * t * t).exp() * (0.5 - 0.25 * t * t);
    num_complex::Complex64::new(v, 0.0)
}

/// Weighted Lebesgue exponents (nu, p) with q = p / (p - 1). p may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LebesgueParams {
    pub nu: f64,
    pub p: f64,
    pub q: f64,
}

impl LebesgueParams {
    pub fn new(nu: f64, p: f64) -> Result<Self> {
        if !nu.is_finite() || !(p >= 1.0) {
            return Err(Error::Domain(format!(
                "need finite nu and p >= 1 (got nu={nu}, p={p})"
            )));
        }
        let q = if p == 1.0 {
            f64::INFINITY
        } else if p.is_infinite() {
            1.0
        } else {
            p / (p - 1.0)
        };
        Ok(Self { nu, p, q })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_exponents() {
        let l = LebesgueParams::new(0.5, 2.0).unwrap();
        assert_eq!(l.q, 2.0);
        let l = LebesgueParams::new(0.5, 3.0).unwrap();
        assert!((1.0 / l.p + 1.0 / l.q - 1.0).abs() < 1e-15);
        assert_eq!(LebesgueParams::new(0.5, f64::INFINITY).unwrap().q, 1.0);
        assert!(LebesgueParams::new(0.5, 0.5).is_err());
    }

    #[test]
    fn combination_evaluates_pointwise() {
        let f = canonical_f();
        let g = canonical_g();
        let h = SampledFunction::combine(2.0, &f, -3.0, &g);
        let x = 0.7;
        assert_eq!(h.eval(x), 2.0 * f.eval(x) + -3.0 * g.eval(x));
        assert_eq!(h.decay, Decay::Exponential { rate: 1.0 });
    }
}
