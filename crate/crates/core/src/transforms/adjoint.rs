//! The adjoint transform (Gg)(x) = int Psi_tau(x) g(tau) dtau, its Fourier
//! route, x-derivatives, and a Mellin-side profile that evaluates G and its
//! derivatives at many x for the cost of one precomputation.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use super::forward::fourier_transform;
use super::function::SampledFunction;
use crate::error::{Error, Result};
use crate::guard::Guard;
use crate::kernel::{psi_auto, psi_delta_envelope, psi_derivative_x, re_k0_rotated};
use crate::quadrature::{integrate_even_analytic, integrate_interval, ContourSpec, QuadratureSpec};
use crate::specfun::log_gamma;
use crate::EvalResult;

const SQRT_PI: f64 = 1.772_453_850_905_516;
const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
/// Closest the weight exponent theta may come to pi/2.
pub const THETA_MARGIN: f64 = 0.05;

/// Decay rate in tau used to bound the kernel when the weight is e^{theta tau}.
pub(crate) fn envelope_delta(theta: f64) -> f64 {
    (0.5 * (theta.abs() + FRAC_PI_2)).max(1.2)
}

/// Truncation point T for int Psi_tau(x) e^{theta tau} g(tau) dtau and a
/// bound on the discarded tails.
pub(crate) fn tau_cutoff(g: &SampledFunction, x: f64, theta: f64) -> Result<(f64, f64)> {
    if !(FRAC_PI_2 - theta.abs() >= THETA_MARGIN) {
        return Err(Error::TruncationInfeasible(format!(
            "|theta| = {} leaves no computable kernel decay (needs <= pi/2 - {THETA_MARGIN})",
            theta.abs()
        )));
    }
    let delta = envelope_delta(theta);
    let bound = |t: f64| -> Result<f64> {
        let w = (g.eval(t) * (theta * t).exp())
            .abs()
            .max((g.eval(-t) * (-theta * t).exp()).abs());
        Ok(w * psi_delta_envelope(t, x, delta)?)
    };
    let mut peak = bound(0.0)?;
    let mut quiet = 0;
    let mut t = 0.0;
    loop {
        t += 0.5;
        let b = bound(t)?;
        peak = peak.max(b);
        if b <= 1e-18 * peak {
            quiet += 1;
            if quiet == 4 {
                if peak == 0.0 {
                    // the envelope underflows: nothing to integrate
                    return Ok((0.0, 0.0));
                }
                let tail = 2.0 * b / (delta - theta.abs());
                return Ok((t, tail));
            }
        } else {
            quiet = 0;
        }
        if t > 2000.0 {
            return Err(Error::TruncationInfeasible(
                "weighted kernel does not decay in tau".into(),
            ));
        }
    }
}

/// int Psi_tau(x) e^{theta tau} g(tau) dtau over the truncated range. With
/// theta = 0 this is exactly the adjoint transform.
pub(crate) fn weighted_tau_integral(
    g: &SampledFunction,
    x: f64,
    theta: f64,
) -> Result<EvalResult<f64>> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("x must be positive (got {x})")));
    }
    let (t_end, tail) = tau_cutoff(g, x, theta)?;
    if t_end == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            err_est: 0.0,
        });
    }
    let guard = Guard::new();
    let integrand = |t: f64| {
        let v = g.eval(t);
        if v == 0.0 {
            return 0.0;
        }
        guard.take(psi_auto(t, x)) * (theta * t).exp() * v
    };
    let r = split_integral(integrand, &g.breakpoints, t_end);
    guard.check()?;
    let r = r?;
    Ok(EvalResult {
        value: r.value,
        err_est: r.err_est + tail + guard.worst(),
    })
}

/// int_{-t_end}^{t_end} split at 0 and at the breakpoints, so kinks of g sit
/// at panel ends.
fn split_integral<F>(f: F, breakpoints: &[f64], t_end: f64) -> Result<EvalResult<f64>>
where
    F: Fn(f64) -> f64,
{
    let mut cuts = vec![-t_end, 0.0, t_end];
    cuts.extend(breakpoints.iter().filter(|b| b.abs() < t_end));
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();
    let spec = QuadratureSpec::default();
    let mut out = EvalResult {
        value: 0.0,
        err_est: 0.0,
    };
    for w in cuts.windows(2) {
        let r = integrate_interval(&f, w[0], w[1], &spec)?;
        out.value += r.value;
        out.err_est += r.err_est;
    }
    Ok(out)
}

/// (Gg)(x) = int_{-inf}^{inf} Psi_tau(x) g(tau) dtau.
pub fn adjoint_g(g: &SampledFunction, x: f64) -> Result<EvalResult<f64>> {
    weighted_tau_integral(g, x, 0.0)
}

/// d/dx (Gg)(x), differentiating under the integral with the contour
/// derivative of Psi. Accurate but slow; see [`AdjointProfile`] for grids.
pub fn adjoint_g_derivative(g: &SampledFunction, x: f64) -> Result<EvalResult<f64>> {
    let (t_end, tail) = tau_cutoff(g, x, 0.0)?;
    if t_end == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            err_est: 0.0,
        });
    }
    let contour = ContourSpec::default();
    let guard = Guard::new();
    let r = split_integral(
        |t: f64| {
            let v = g.eval(t);
            if v == 0.0 {
                return 0.0;
            }
            guard.take(psi_derivative_x(t, x, 1, &contour)) * v
        },
        &g.breakpoints,
        t_end,
    );
    guard.check()?;
    let r = r?;
    Ok(EvalResult {
        value: r.value,
        err_est: r.err_est + tail / x + guard.worst(),
    })
}

/// (Gg)(x) = -sqrt(2/pi) int Re K_0(4 e^{i pi/4} sqrt(x cosh t)) (F g)(t) dt with
/// the Fourier transform of g supplied by the caller.
pub fn adjoint_g_fourier_route_with<FG>(fourier_g: FG, x: f64) -> Result<EvalResult<f64>>
where
    FG: Fn(f64) -> Result<Complex64>,
{
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("x must be positive (got {x})")));
    }
    let cutoff = (253.125 / x).max(1.0).acosh().max(1.0);
    let guard = Guard::new();
    let r =
        integrate_even_analytic(
            |t: f64| {
                let k = guard.take(re_k0_rotated(x * t.cosh()));
                let fg = guard.take(fourier_g(t).and_then(|a| fourier_g(-t).map(|b| a + b)).map(
                    |v| EvalResult {
                        value: v.re,
                        err_est: 0.0,
                    },
                ));
                k * fg
            },
            0.25,
            Some(cutoff),
            &QuadratureSpec::default(),
        );
    guard.check()?;
    let r = r?;
    Ok(EvalResult {
        value: -SQRT_2_OVER_PI * r.value,
        err_est: SQRT_2_OVER_PI * (r.err_est + guard.worst() * cutoff),
    })
}

/// As [`adjoint_g_fourier_route_with`], with the Fourier transform of g
/// computed by quadrature.
pub fn adjoint_g_fourier_route(g: &SampledFunction, x: f64) -> Result<EvalResult<f64>> {
    adjoint_g_fourier_route_with(|t| fourier_transform(g, t).map(|r| r.value), x)
}

/// u(x) = int Psi_tau(x) w(tau) dtau and its x-derivatives, from
/// u(x) = -(1/(8 sqrt pi)) (1/2 pi i) int Gamma(s/2) / Gamma((1-s)/2) H(s) x^{-s} ds,
/// H(s) = int Gamma((s + i tau)/2) Gamma((s - i tau)/2) w(tau) dtau.
/// H is tabulated once on the contour; each evaluation is then a single sum.
#[derive(Debug, Clone)]
pub struct AdjointProfile {
    gamma: f64,
    step: f64,
    /// Gamma(s/2) / Gamma((1-s)/2) H(s) at s = gamma + i j step, j >= 0.
    coeffs: Vec<Complex64>,
}

impl AdjointProfile {
    /// Node spacing on the contour.
    pub const STEP: f64 = 1.0 / 32.0;

    /// Tabulates the profile of a real weight supported (to working precision)
    /// on [-tau_end, tau_end].
    pub fn new<W>(weight: W, tau_end: f64) -> Result<Self>
    where
        W: Fn(f64) -> f64,
    {
        let gamma = 0.25;
        let step = Self::STEP;
        let spec = QuadratureSpec::default().with_rel_tol(1e-13);
        let mut coeffs = Vec::new();
        let mut peak: f64 = 0.0;
        let mut quiet = 0usize;
        let mut j = 0usize;
        loop {
            let s = Complex64::new(gamma, j as f64 * step);
            let lead = log_gamma(s * 0.5)? - log_gamma((1.0 - s) * 0.5)?;
            // the gamma product is even in tau, so fold the weight
            let h = integrate_interval(
                |t: f64| {
                    let w = weight(t) + weight(-t);
                    if w == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let it = Complex64::new(0.0, t);
                    match (log_gamma((s + it) * 0.5), log_gamma((s - it) * 0.5)) {
                        (Ok(a), Ok(b)) => (a + b + lead).exp() * w,
                        _ => Complex64::new(f64::NAN, 0.0),
                    }
                },
                0.0,
                tau_end,
                &spec,
            )?;
            let c = h.value;
            let m = c.norm();
            peak = peak.max(m);
            coeffs.push(c);
            if m <= 1e-18 * peak {
                quiet += 1;
                if quiet as f64 * step >= 1.0 {
                    break;
                }
            } else {
                quiet = 0;
            }
            if j as f64 * step > 5000.0 {
                return Err(Error::TruncationInfeasible("profile does not decay".into()));
            }
            j += 1;
        }
        Ok(Self {
            gamma,
            step,
            coeffs,
        })
    }

    /// Profile of [`weighted_tau_integral`]: weight e^{theta tau} g(tau).
    pub fn for_weighted(g: &SampledFunction, theta: f64, tau_squared: bool) -> Result<Self> {
        let (t_end, _) = tau_cutoff(g, 1e-3, theta)?;
        Self::new(
            |t| {
                let w = (theta * t).exp() * g.eval(t);
                if tau_squared {
                    t * t * w
                } else {
                    w
                }
            },
            t_end,
        )
    }

    /// Height of the tabulated contour.
    pub fn height(&self) -> f64 {
        (self.coeffs.len() - 1) as f64 * self.step
    }

    /// d^n u / dx^n at x > 0 for n = 0..=4.
    pub fn eval(&self, x: f64, order: u32) -> Result<EvalResult<f64>> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Domain(format!("x must be positive (got {x})")));
        }
        if order > 4 {
            return Err(Error::Domain(format!("derivative order {order} exceeds 4")));
        }
        let lx = x.ln();
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        let term = |j: usize| {
            let s = Complex64::new(self.gamma, j as f64 * self.step);
            let mut poch = Complex64::new(sign, 0.0);
            for k in 0..order {
                poch *= s + k as f64;
            }
            self.coeffs[j] * poch * (-s * lx).exp()
        };
        let (mut fine, mut coarse, mut mass) = (0.0, 0.0, 0.0);
        for j in 0..self.coeffs.len() {
            let v = term(j);
            let w = if j == 0 { 1.0 } else { 2.0 };
            fine += w * v.re;
            mass += w * v.norm();
            if j % 2 == 0 {
                coarse += w * v.re;
            }
        }
        let scale = -self.step / (2.0 * PI) / (8.0 * SQRT_PI) * x.powi(-(order as i32));
        let fine_v = scale * fine;
        let coarse_v = 2.0 * scale * coarse;
        Ok(EvalResult {
            value: fine_v,
            err_est: (fine_v - coarse_v)
                .abs()
                .min(1e-3 * fine_v.abs().max(1e-300))
                + 8.0 * f64::EPSILON * scale.abs() * mass,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::function::{canonical_g, canonical_g_fourier};
    use super::*;
    use crate::quadrature::Decay;

    const G_AT_1: f64 = 0.013_282_022_621_120_994;

    #[test]
    fn adjoint_reference() {
        let r = adjoint_g(&canonical_g(), 1.0).unwrap();
        assert!((r.value - G_AT_1).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn fourier_route_agrees() {
        let analytic = adjoint_g_fourier_route_with(|t| Ok(canonical_g_fourier(t)), 1.0).unwrap();
        let numeric = adjoint_g_fourier_route(&canonical_g(), 1.0).unwrap();
        assert!(
            (analytic.value - G_AT_1).abs() < 1e-11,
            "{}",
            analytic.value
        );
        assert!((numeric.value - G_AT_1).abs() < 1e-11, "{}", numeric.value);
    }

    #[test]
    fn odd_weight_gives_zero() {
        let g = SampledFunction::new(|t| t * (-t * t).exp(), 1.0, Decay::Gaussian { rate: 1.0 });
        assert!(adjoint_g(&g, 1.0).unwrap().value.abs() < 1e-14);
    }

    #[test]
    fn profile_matches_direct_integral() {
        let g = canonical_g();
        let p = AdjointProfile::for_weighted(&g, 0.0, false).unwrap();
        let v = p.eval(1.0, 0).unwrap();
        assert!((v.value - G_AT_1).abs() < 1e-12, "{}", v.value);
        let d = p.eval(1.0, 1).unwrap().value;
        let slow = adjoint_g_derivative(&g, 1.0).unwrap().value;
        assert!((d - slow).abs() < 1e-10, "{d} vs {slow}");
    }

    #[test]
    fn infeasible_theta() {
        assert!(matches!(
            tau_cutoff(&canonical_g(), 1.0, 1.55),
            Err(Error::TruncationInfeasible(_))
        ));
    }
}
