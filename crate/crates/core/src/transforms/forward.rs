//! The forward transform (Ff)(tau) = int_0^inf Psi_tau(x) f(x) dx by three
//! routes, and the Mellin, Fourier-cosine and Meijer-type helpers.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::function::SampledFunction;
use super::norms::norm_l0;
use crate::error::{Error, Result};
use crate::guard::Guard;
use crate::kernel::{psi_auto, re_k0_rotated};
use crate::quadrature::{
    integrate_contour_with_hint, integrate_even_analytic, integrate_function,
    integrate_semi_infinite, ContourSpec, Decay, QuadratureSpec,
};
use crate::specfun::log_gamma;
use crate::EvalResult;

const SQRT_PI: f64 = 1.772_453_850_905_516;
const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// f*(s) = int_0^inf f(x) x^{s-1} dx.
pub fn mellin_numeric(f: &SampledFunction, s: Complex64) -> Result<EvalResult<Complex64>> {
    if !(s.re + f.zero_exponent > 0.0) {
        return Err(Error::Divergence(format!(
            "Mellin integral diverges at 0 for Re s = {} (f ~ x^{})",
            s.re, f.zero_exponent
        )));
    }
    if let Decay::Power { exponent } = f.decay {
        if !(s.re < exponent) {
            return Err(Error::Divergence(format!(
                "Mellin integral diverges at infinity for Re s = {} (f ~ x^-{exponent})",
                s.re
            )));
        }
    }
    let sm1 = s - 1.0;
    integrate_function(
        |x: f64| f.eval(x) * (sm1 * x.ln()).exp(),
        f.decay,
        &QuadratureSpec::default(),
    )
}

/// (F_c f)(x) = sqrt(2/pi) int_0^inf f(t) cos(x t) dt.
pub fn fourier_cosine<F>(f: F, x: f64) -> Result<EvalResult<f64>>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_semi_infinite(|t: f64| f(t) * (x * t).cos(), &QuadratureSpec::default())?;
    Ok(EvalResult {
        value: SQRT_2_OVER_PI * r.value,
        err_est: SQRT_2_OVER_PI * r.err_est,
    })
}

/// (1/sqrt(2 pi)) int g(tau) e^{i tau t} dtau, as two half-line integrals so
/// a kink of g at 0 costs nothing.
pub fn fourier_transform(g: &SampledFunction, t: f64) -> Result<EvalResult<Complex64>> {
    let spec = QuadratureSpec::default();
    let right = integrate_semi_infinite(
        |tau: f64| Complex64::from_polar(g.eval(tau), tau * t),
        &spec,
    )?;
    let left = integrate_semi_infinite(
        |tau: f64| Complex64::from_polar(g.eval(-tau), -tau * t),
        &spec,
    )?;
    let c = 0.5 * SQRT_2_OVER_PI;
    Ok(EvalResult {
        value: (right.value + left.value) * c,
        err_est: (right.err_est + left.err_est) * c,
    })
}

/// (Ff)(tau) = int_0^inf Psi_tau(x) f(x) dx. The integral runs in v with
/// x = v^2 / 2, which turns the e^{-2 sqrt(2x)} decay of the kernel into e^{-2v}.
pub fn forward_f(f: &SampledFunction, tau: f64) -> Result<EvalResult<f64>> {
    norm_l0(f)?;
    forward_f_unchecked(f, tau)
}

/// [`forward_f`] without the membership check, for loops over tau.
pub(crate) fn forward_f_unchecked(f: &SampledFunction, tau: f64) -> Result<EvalResult<f64>> {
    if !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be finite (got {tau})")));
    }
    let guard = Guard::new();
    let r = integrate_function(
        |x: f64| guard.take(psi_auto(tau, x)) * f.eval(x),
        Decay::SqrtExponential {
            rate: 2.0 * 2f64.sqrt(),
        },
        &QuadratureSpec::default(),
    );
    guard.check()?;
    let r = r?;
    Ok(EvalResult {
        value: r.value,
        err_est: r.err_est + guard.worst(),
    })
}

/// (Ff)(tau) from the Mellin transform of f:
/// -(1/(8 sqrt pi)) (1/2 pi i) int Gamma(s/2) Gamma((s +- i tau)/2) / Gamma((1-s)/2) f*(1-s) ds.
pub fn forward_f_mellin<M>(fstar: M, tau: f64, contour: &ContourSpec) -> Result<EvalResult<f64>>
where
    M: Fn(Complex64) -> Complex64,
{
    if !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be finite (got {tau})")));
    }
    if !(contour.gamma > 0.0 && contour.gamma < 1.0) {
        return Err(Error::Domain(format!(
            "contour abscissa must lie in (0, 1) (got {})",
            contour.gamma
        )));
    }
    let it = Complex64::new(0.0, tau.abs());
    let g = |s: Complex64| {
        let Ok(den) = log_gamma((1.0 - s) * 0.5) else {
            return Complex64::new(0.0, 0.0);
        };
        let (Ok(a), Ok(b), Ok(c)) = (
            log_gamma(s * 0.5),
            log_gamma((s + it) * 0.5),
            log_gamma((s - it) * 0.5),
        ) else {
            return Complex64::new(f64::NAN, 0.0);
        };
        (a + b + c - den).exp() * fstar(1.0 - s)
    };
    let r =
        integrate_contour_with_hint(g, contour, 1.0, &QuadratureSpec::default(), tau.abs() + 5.0)?;
    let scale = 1.0 / (8.0 * SQRT_PI);
    Ok(EvalResult {
        value: -scale * r.value.re,
        err_est: scale * r.err_est,
    })
}

/// (K_0 f)(x) = -sqrt(2/pi) int_0^inf Re K_0(4 e^{i pi/4} sqrt(x t)) f(t) dt.
pub fn meijer_k0(f: &SampledFunction, x: f64) -> Result<EvalResult<f64>> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("x must be positive (got {x})")));
    }
    let guard = Guard::new();
    let r = integrate_semi_infinite(
        |t: f64| {
            let v = f.eval(t);
            if v == 0.0 {
                0.0
            } else {
                guard.take(re_k0_rotated(x * t)) * v
            }
        },
        &QuadratureSpec::default(),
    );
    guard.check()?;
    let r = r?;
    Ok(EvalResult {
        value: -SQRT_2_OVER_PI * r.value,
        err_est: SQRT_2_OVER_PI * r.err_est,
    })
}

/// (Ff)(tau) as the Fourier cosine transform of t -> (K_0 f)(cosh t).
pub fn forward_f_composition(f: &SampledFunction, tau: f64) -> Result<EvalResult<f64>> {
    if !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be finite (got {tau})")));
    }
    let t = tau.abs();
    let guard = Guard::new();
    let r = integrate_even_analytic(
        |u: f64| (t * u).cos() * guard.take(meijer_k0(f, u.cosh())),
        (2.0 * PI / (t + 12.0)).min(0.5),
        None,
        &QuadratureSpec::default(),
    );
    guard.check()?;
    let r = r?;
    Ok(EvalResult {
        value: SQRT_2_OVER_PI * r.value,
        err_est: SQRT_2_OVER_PI * (r.err_est + guard.worst()),
    })
}

#[cfg(test)]
mod tests {
    use super::super::function::{canonical_f, canonical_f_mellin};
    use super::*;

    #[test]
    fn mellin_of_exponential() {
        let f = SampledFunction::new(|x| (-x).exp(), 0.0, Decay::Exponential { rate: 1.0 });
        let r = mellin_numeric(&f, Complex64::new(2.0, 0.0)).unwrap();
        assert!((r.value - 1.0).norm() < 1e-13);
    }

    #[test]
    fn mellin_of_canonical_f() {
        let f = canonical_f();
        for &t in &[0.0, 1.3, -4.0] {
            let s = Complex64::new(0.5, t);
            let r = mellin_numeric(&f, s).unwrap();
            assert!((r.value - canonical_f_mellin(s)).norm() < 1e-12, "t={t}");
        }
        let at_one = mellin_numeric(&f, Complex64::new(1.0, 0.0)).unwrap();
        assert!(at_one.value.norm() < 1e-14);
    }

    #[test]
    fn mellin_divergence_detected() {
        let f = SampledFunction::new(|x| 1.0 / (1.0 + x * x), 0.0, Decay::Power { exponent: 2.0 });
        assert!(matches!(
            mellin_numeric(&f, Complex64::new(2.5, 0.0)),
            Err(Error::Divergence(_))
        ));
        assert!(matches!(
            mellin_numeric(&f, Complex64::new(0.0, 0.0)),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn fourier_cosine_pairs() {
        let r = fourier_cosine(|t| (-t).exp(), 0.0).unwrap();
        assert!((r.value - SQRT_2_OVER_PI).abs() < 1e-14);
        let r = fourier_cosine(|t| (-0.5 * t * t).exp(), 1.0).unwrap();
        assert!((r.value - (-0.5f64).exp()).abs() < 1e-13);
        // F_c[sech(t)](x) = sqrt(pi/2) sech(pi x / 2)
        let r = fourier_cosine(|t| 1.0 / t.cosh(), 1.0).unwrap();
        let exact = (PI / 2.0).sqrt() / (PI / 2.0).cosh();
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn forward_routes_agree_at_tau_one() {
        let f = canonical_f();
        let a = forward_f(&f, 1.0).unwrap().value;
        let b = forward_f_mellin(canonical_f_mellin, 1.0, &ContourSpec::default())
            .unwrap()
            .value;
        let reference = -0.018_937_813_909_136_841;
        assert!((a - reference).abs() < 1e-11, "direct {a}");
        assert!((b - reference).abs() < 1e-13, "mellin {b}");
    }

    #[test]
    fn meijer_linear() {
        let f = canonical_f();
        let a = meijer_k0(&f, 1.0).unwrap().value;
        let b = meijer_k0(&f.scaled(-2.5), 1.0).unwrap().value;
        assert!((b + 2.5 * a).abs() < 1e-12 * a.abs());
        assert!((a + 0.033_203_857_446_371_576).abs() < 1e-12);
    }
}
