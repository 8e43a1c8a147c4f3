//! The kernels Psi_tau(x) and Phi_tau(x).
//!
//! With z = 2 sqrt(2x),
//! Psi_tau(x) = K_{i tau}(z) Im J_{i tau}(z) / sinh(pi tau / 2) and
//! Phi_tau(x) = K_{i tau}(z) Re J_{i tau}(z).
//! Psi has three routes: the Bessel product, a cosine integral of Re K_0 and
//! a Mellin-Barnes integral. Derivatives in x come from the Mellin-Barnes form.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::guard::Guard;
use crate::quadrature::{
    integrate_contour_multi, integrate_contour_with_hint, integrate_even_analytic,
    integrate_panels, ContourSpec, QuadratureSpec,
};
use crate::specfun::{
    bessel_j_imag_order, log_gamma, macdonald_complex_arg, macdonald_imag_order, J_MAX_ARG,
    J_MAX_ORDER,
};
use crate::EvalResult;

/// Below this |tau| the Bessel-product route is refused.
pub const TAU_MIN: f64 = 1e-3;
const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Evaluation route for Psi.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Direct,
    Fourier,
    MellinBarnes,
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Route::Direct),
            "fourier" => Ok(Route::Fourier),
            "mellin-barnes" | "mellin" | "mb" => Ok(Route::MellinBarnes),
            _ => Err(Error::Domain(format!("unknown route '{s}'"))),
        }
    }
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::Direct => "direct",
            Route::Fourier => "fourier",
            Route::MellinBarnes => "mellin-barnes",
        })
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "x must be positive and finite (got {x})"
        )))
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("tau must be finite (got {tau})")))
    }
}

/// Psi_tau(x) from the Bessel product. Refused for |tau| < [`TAU_MIN`].
pub fn psi_direct(tau: f64, x: f64) -> Result<EvalResult<f64>> {
    check_tau(tau)?;
    check_x(x)?;
    if tau.abs() < TAU_MIN {
        return Err(Error::RouteUnavailable(format!(
            "direct route needs |tau| >= {TAU_MIN} (got {tau}); use the Fourier route"
        )));
    }
    let t = tau.abs();
    let z = 2.0 * (2.0 * x).sqrt();
    let k = macdonald_imag_order(t, z)?;
    if k.value == 0.0 && k.err_est == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            err_est: 0.0,
        });
    }
    let j = bessel_j_imag_order(t, z)?;
    let s = (FRAC_PI_2 * t).sinh();
    Ok(EvalResult {
        value: k.value * j.value.im / s,
        err_est: (j.value.im.abs() * k.err_est + k.value.abs() * j.err_est) / s,
    })
}

/// Phi_tau(x) from the Bessel product.
pub fn phi_direct(tau: f64, x: f64) -> Result<EvalResult<f64>> {
    check_tau(tau)?;
    check_x(x)?;
    let z = 2.0 * (2.0 * x).sqrt();
    let k = macdonald_imag_order(tau, z)?;
    if k.value == 0.0 && k.err_est == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            err_est: 0.0,
        });
    }
    let j = bessel_j_imag_order(tau, z)?;
    Ok(EvalResult {
        value: k.value * j.value.re,
        err_est: j.value.re.abs() * k.err_est + k.value.abs() * j.err_est,
    })
}

/// Re K_0(4 e^{i pi/4} sqrt(y)) for y > 0.
pub fn re_k0_rotated(y: f64) -> Result<EvalResult<f64>> {
    check_x(y)?;
    let w = Complex64::from_polar(4.0 * y.sqrt(), FRAC_PI_4);
    let k = macdonald_complex_arg(0.0, w)?;
    Ok(EvalResult {
        value: k.value.re,
        err_est: k.err_est,
    })
}

/// Psi_tau(x) = -(2/pi) int_0^inf cos(tau u) Re K_0(4 e^{i pi/4} sqrt(x cosh u)) du.
/// Valid at tau = 0.
pub fn psi_fourier(tau: f64, x: f64) -> Result<EvalResult<f64>> {
    check_tau(tau)?;
    check_x(x)?;
    let t = tau.abs();
    // |K_0(w)| < e^{-45} once Re w = 2 sqrt(2 x cosh u) >= 45
    let cutoff = (253.125 / x).max(1.0).acosh().max(1.0);
    let h0 = (2.0 * PI / (t + 16.0)).min(0.5);
    let guard = Guard::new();
    let r = integrate_even_analytic(
        |u: f64| (t * u).cos() * guard.take(re_k0_rotated(x * u.cosh())),
        h0,
        Some(cutoff),
        &QuadratureSpec::default(),
    );
    guard.check()?;
    let r = r?;
    Ok(EvalResult {
        value: -2.0 / PI * r.value,
        err_est: 2.0 / PI * (r.err_est + guard.worst() * cutoff),
    })
}

fn ln_gamma_or_pole(z: Complex64) -> Option<Complex64> {
    log_gamma(z).ok()
}

/// log of Gamma(s/2) Gamma((s + i tau)/2) Gamma((s - i tau)/2) / Gamma((1 - s)/2).
/// `None` when 1/Gamma((1-s)/2) vanishes.
fn psi_mb_log_integrand(s: Complex64, tau: f64) -> Option<Complex64> {
    let it = Complex64::new(0.0, tau);
    let den = ln_gamma_or_pole((1.0 - s) * 0.5)?;
    let a = log_gamma(s * 0.5).ok()?;
    let b = log_gamma((s + it) * 0.5).ok()?;
    let c = log_gamma((s - it) * 0.5).ok()?;
    Some(a + b + c - den)
}

fn check_contour_psi(contour: &ContourSpec) -> Result<()> {
    if contour.gamma > 0.0 && contour.gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "contour abscissa must be positive (got {})",
            contour.gamma
        )))
    }
}

/// Psi_tau(x) from the Mellin-Barnes integral on Re s = contour.gamma > 0.
pub fn psi_mellin_barnes(tau: f64, x: f64, contour: &ContourSpec) -> Result<EvalResult<f64>> {
    psi_derivative_x(tau, x, 0, contour)
}

/// d^n/dx^n Psi_tau(x) for n = 0..=4, by differentiating under the
/// Mellin-Barnes integral.
pub fn psi_derivative_x(
    tau: f64,
    x: f64,
    order: u32,
    contour: &ContourSpec,
) -> Result<EvalResult<f64>> {
    check_tau(tau)?;
    check_x(x)?;
    check_contour_psi(contour)?;
    if order > 4 {
        return Err(Error::Domain(format!("derivative order {order} exceeds 4")));
    }
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    let g = |s: Complex64| {
        let Some(l) = psi_mb_log_integrand(s, tau) else {
            return Complex64::new(0.0, 0.0);
        };
        let mut poch = Complex64::new(sign, 0.0);
        for k in 0..order {
            poch *= s + k as f64;
        }
        l.exp() * poch
    };
    let r =
        integrate_contour_with_hint(g, contour, x, &QuadratureSpec::default(), tau.abs() + 5.0)?;
    let scale = -1.0 / (8.0 * SQRT_PI) * x.powi(-(order as i32));
    Ok(EvalResult {
        value: scale * r.value.re,
        err_est: scale.abs() * r.err_est,
    })
}

/// Default contour for [`phi_derivative_x`].
pub fn phi_contour() -> ContourSpec {
    ContourSpec::with_gamma(0.5)
}

/// d/dx Phi_tau(x) from
/// (1/2 pi i) int Gamma((1+s)/2) / Gamma(1 - s/2) Gamma((s +- i tau)/2) s x^{-s} ds
///   = -(8 sqrt(pi) / cosh(pi tau / 2)) x Phi_tau'(x), 0 < gamma < 1.
pub fn phi_derivative_x(tau: f64, x: f64, contour: &ContourSpec) -> Result<EvalResult<f64>> {
    let mut out = phi_derivative_x_multi(tau, &[x], contour)?;
    Ok(out.remove(0))
}

/// [`phi_derivative_x`] at several x, sharing the gamma-function work.
pub fn phi_derivative_x_multi(
    tau: f64,
    xs: &[f64],
    contour: &ContourSpec,
) -> Result<Vec<EvalResult<f64>>> {
    check_tau(tau)?;
    for &x in xs {
        check_x(x)?;
    }
    if !(contour.gamma > 0.0 && contour.gamma < 1.0) {
        return Err(Error::Domain(format!(
            "contour abscissa must lie in (0, 1) (got {})",
            contour.gamma
        )));
    }
    let t = tau.abs();
    // log cosh(pi t / 2), folded into the integrand to avoid overflow
    let a = FRAC_PI_2 * t;
    let log_cosh = a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2;
    let it = Complex64::new(0.0, t);
    let g = |s: Complex64| {
        let Ok(den) = log_gamma(1.0 - s * 0.5) else {
            return Complex64::new(0.0, 0.0);
        };
        let (Ok(a), Ok(b), Ok(c)) = (
            log_gamma((1.0 + s) * 0.5),
            log_gamma((s + it) * 0.5),
            log_gamma((s - it) * 0.5),
        ) else {
            return Complex64::new(f64::NAN, 0.0);
        };
        (a + b + c - den + log_cosh).exp() * s
    };
    let rs = integrate_contour_multi(g, contour, xs, &QuadratureSpec::default(), t + 5.0)?;
    Ok(xs
        .iter()
        .zip(rs)
        .map(|(&x, r)| {
            let scale = -1.0 / (8.0 * SQRT_PI * x);
            EvalResult {
                value: scale * r.value.re,
                err_est: scale.abs() * r.err_est,
            }
        })
        .collect())
}

/// Psi through the chosen route. The Mellin-Barnes route uses the default
/// contour.
pub fn psi(tau: f64, x: f64, route: Route) -> Result<EvalResult<f64>> {
    match route {
        Route::Direct => psi_direct(tau, x),
        Route::Fourier => psi_fourier(tau, x),
        Route::MellinBarnes => psi_mellin_barnes(tau, x, &ContourSpec::default()),
    }
}

/// Bound sup_tau |Psi_tau(x)| <= (4/pi) K_0^2(sqrt(2x)).
pub fn psi_envelope(x: f64) -> Result<f64> {
    check_x(x)?;
    let k = macdonald_imag_order(0.0, (2.0 * x).sqrt())?.value;
    Ok(4.0 / PI * k * k)
}

/// Bound |Psi_tau(x)| <= (4/pi) e^{-delta |tau|} K_0^2(cos(delta/2) sqrt(2x cos delta))
/// for 0 <= delta < pi/2.
pub fn psi_delta_envelope(tau: f64, x: f64, delta: f64) -> Result<f64> {
    check_x(x)?;
    if !(0.0..FRAC_PI_2).contains(&delta) {
        return Err(Error::Domain(format!(
            "delta must lie in [0, pi/2) (got {delta})"
        )));
    }
    let arg = (0.5 * delta).cos() * (2.0 * x * delta.cos()).sqrt();
    let k = macdonald_imag_order(0.0, arg)?.value;
    Ok(4.0 / PI * (-delta * tau.abs()).exp() * k * k)
}

/// Psi for use inside quadratures: the Fourier route below [`TAU_MIN`], the
/// Bessel product otherwise. Where the Bessel series is out of range the
/// value is 0 with the delta-envelope as its error bar.
pub(crate) fn psi_auto(tau: f64, x: f64) -> Result<EvalResult<f64>> {
    if tau.abs() < TAU_MIN {
        return psi_fourier(tau, x);
    }
    let z = 2.0 * (2.0 * x).sqrt();
    if z > J_MAX_ARG || tau.abs() > J_MAX_ORDER {
        return Ok(EvalResult {
            value: 0.0,
            err_est: psi_delta_envelope(tau, x, 1.2)?,
        });
    }
    psi_direct(tau, x)
}

/// Outcome of a pointwise inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Compares |Psi_tau(x)| (Fourier route) with the delta-envelope.
pub fn check_bound_delta(tau: f64, x: f64, delta: f64) -> Result<BoundCheck> {
    let rhs = psi_delta_envelope(tau, x, delta)?;
    let lhs = psi_fourier(tau, x)?;
    Ok(BoundCheck {
        lhs: lhs.value.abs(),
        rhs,
        satisfied: lhs.value.abs() <= rhs + lhs.err_est,
    })
}

/// Both sides of int_0^inf cos(tau u) Psi_tau(x) dtau = -Re K_0(4 e^{i pi/4} sqrt(x cosh u)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexIntegralCheck {
    pub lhs: EvalResult<f64>,
    pub rhs: EvalResult<f64>,
}

pub fn index_integral_check(x: f64, u: f64) -> Result<IndexIntegralCheck> {
    check_x(x)?;
    if !u.is_finite() {
        return Err(Error::Domain(format!("u must be finite (got {u})")));
    }
    let delta = 1.2;
    let head = psi_delta_envelope(0.0, x, delta)?;
    let tail_tol = 1e-12;
    let t_end = ((head / (delta * tail_tol)).ln() / delta).max(5.0).ceil();
    let guard = Guard::new();
    let f = |t: f64| (t * u).cos() * guard.take(psi_auto(t, x));
    let coarse: f64 = integrate_panels(&f, 0.0, t_end, 1.0, 16);
    let fine: f64 = integrate_panels(&f, 0.0, t_end, 0.5, 16);
    guard.check()?;
    let tail = head * (-delta * t_end).exp() / delta;
    let rhs = re_k0_rotated(x * u.cosh())?;
    Ok(IndexIntegralCheck {
        lhs: EvalResult {
            value: fine,
            err_est: (fine - coarse).abs() + tail + guard.worst() * t_end,
        },
        rhs: EvalResult {
            value: -rhs.value,
            err_est: rhs.err_est,
        },
    })
}

/// Terms of x^2 Psi'''' + 5x Psi''' + (4 + tau^2) Psi'' + 16 Psi and their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeResidual {
    pub terms: [f64; 4],
    pub residual: f64,
    /// |residual| / max |term|
    pub normalized: f64,
}

pub fn ode_residual(tau: f64, x: f64, contour: &ContourSpec) -> Result<OdeResidual> {
    let d = |n| psi_derivative_x(tau, x, n, contour).map(|r| r.value);
    let terms = [
        x * x * d(4)?,
        5.0 * x * d(3)?,
        (4.0 + tau * tau) * d(2)?,
        16.0 * d(0)?,
    ];
    let residual: f64 = terms.iter().sum();
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    Ok(OdeResidual {
        terms,
        residual,
        normalized: if scale > 0.0 {
            residual.abs() / scale
        } else {
            0.0
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PSI_1_1: f64 = 0.016_109_046_938_613_398;

    #[test]
    fn routes_agree_at_reference_point() {
        let d = psi_direct(1.0, 1.0).unwrap();
        let f = psi_fourier(1.0, 1.0).unwrap();
        let m = psi_mellin_barnes(1.0, 1.0, &ContourSpec::default()).unwrap();
        for v in [d.value, f.value, m.value] {
            assert!((v - PSI_1_1).abs() < 1e-13, "{v}");
        }
    }

    #[test]
    fn direct_refuses_small_tau() {
        assert!(matches!(
            psi_direct(0.0, 1.0),
            Err(Error::RouteUnavailable(_))
        ));
        assert!(psi_fourier(0.0, 1.0).is_ok());
    }

    #[test]
    fn even_in_tau() {
        assert_eq!(
            psi_direct(2.0, 0.7).unwrap().value,
            psi_direct(-2.0, 0.7).unwrap().value
        );
        assert_eq!(
            psi_fourier(2.0, 0.7).unwrap().value,
            psi_fourier(-2.0, 0.7).unwrap().value
        );
    }

    #[test]
    fn domain_errors() {
        assert!(psi_direct(1.0, 0.0).is_err());
        assert!(psi_fourier(1.0, -1.0).is_err());
        assert!(psi_mellin_barnes(1.0, 1.0, &ContourSpec::with_gamma(0.0)).is_err());
        assert!(phi_derivative_x(1.0, 1.0, &ContourSpec::with_gamma(1.5)).is_err());
        assert!(psi_derivative_x(1.0, 1.0, 5, &ContourSpec::default()).is_err());
    }

    #[test]
    fn phi_reference_values() {
        assert!((phi_direct(1.0, 1.0).unwrap().value + 0.010_900_240_094_568_602).abs() < 1e-14);
        let d = phi_derivative_x(1.0, 1.0, &phi_contour()).unwrap();
        assert!(
            (d.value + 0.041_378_341_096_130_105).abs() < 1e-12,
            "{}",
            d.value
        );
    }

    #[test]
    fn first_derivative_matches_finite_difference() {
        let h = 1e-4;
        let x = 0.8;
        let fd = (psi_direct(1.5, x + h).unwrap().value - psi_direct(1.5, x - h).unwrap().value)
            / (2.0 * h);
        let d = psi_derivative_x(1.5, x, 1, &ContourSpec::default())
            .unwrap()
            .value;
        assert!((fd - d).abs() < 1e-6 * d.abs().max(1e-3));
    }

    #[test]
    fn ode_holds_at_reference_point() {
        let r = ode_residual(1.0, 1.0, &ContourSpec::default()).unwrap();
        assert!((r.terms[0] + 0.32434).abs() < 1e-4);
        assert!(r.normalized < 1e-10, "{}", r.normalized);
    }

    #[test]
    fn tau_zero_limit() {
        let v = psi_fourier(0.0, 1.0).unwrap().value;
        assert!((v - 0.018_155_862_587_352_949).abs() < 1e-13);
    }
}
