//! Bessel functions of purely imaginary order and K_nu of complex argument.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::log_gamma;
use crate::error::{Error, Result};
use crate::EvalResult;

const EPS: f64 = f64::EPSILON;
/// Largest |tau| accepted by the series for J_{i tau}.
pub const J_MAX_ORDER: f64 = 50.0;
/// Largest argument accepted by the series for J_{i tau}.
pub const J_MAX_ARG: f64 = 100.0;
/// Exponent of the truncated tail in the Laplace-type integrals.
const TAIL_EXPONENT: f64 = 40.0;
const MAX_HALVINGS: usize = 12;

/// Upper limit U with re_w (cosh U - 1) - nu U >= TAIL_EXPONENT.
fn tail_limit(re_w: f64, nu: f64) -> f64 {
    let mut u = (1.0 + TAIL_EXPONENT / re_w).acosh();
    for _ in 0..8 {
        u = (1.0 + (TAIL_EXPONENT + nu * u) / re_w).acosh();
    }
    u
}

/// The peak of exp(-z (cosh u - 1)) has width ~ 1/sqrt(z), so the starting
/// step only needs to shrink like that once z is large.
fn width_scale(z: f64) -> f64 {
    z.min(14.0 * z.sqrt())
}

/// Trapezoid sums of an even analytic integrand on [0, upper], halving the
/// step until two successive sums agree. Returns (sum, difference, mass).
fn halving_trapezoid<F>(f: F, upper: f64, h0: f64) -> Result<(Complex64, f64, f64)>
where
    F: Fn(f64) -> Complex64,
{
    let mut h = h0;
    let n0 = (upper / h).ceil() as usize;
    let mut raw = f(0.0) * 0.5;
    let mut mass = raw.norm();
    for k in 1..=n0 {
        let v = f(k as f64 * h);
        raw += v;
        mass += v.norm();
    }
    let mut prev = raw * h;
    let mut n = n0;
    let mut diff = f64::INFINITY;
    for _ in 0..MAX_HALVINGS {
        h *= 0.5;
        n *= 2;
        for k in (1..n).step_by(2) {
            let v = f(k as f64 * h);
            raw += v;
            mass += v.norm();
        }
        let cur = raw * h;
        diff = (cur - prev).norm();
        // summation noise over many nodes sits a little above 4 eps
        if diff <= 32.0 * EPS * (mass * h).max(f64::MIN_POSITIVE) {
            return Ok((cur, diff, mass * h));
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        levels: MAX_HALVINGS,
        last: prev.norm(),
        previous: prev.norm() + diff,
    })
}

/// Past this argument e^{-z} is zero in double precision.
const UNDERFLOW_ARG: f64 = 750.0;

/// K_{i tau}(z) for real tau and z > 0, from
/// K_{i tau}(z) = int_0^inf exp(-z cosh u) cos(tau u) du.
pub fn macdonald_imag_order(tau: f64, z: f64) -> Result<EvalResult<f64>> {
    if !(z > 0.0) || !z.is_finite() || !tau.is_finite() {
        return Err(Error::Domain(format!(
            "K_(i tau)(z) needs z > 0 (tau={tau}, z={z})"
        )));
    }
    if z > UNDERFLOW_ARG {
        // |K_(i tau)(z)| <= K_0(z) < e^{-z}
        return Ok(EvalResult {
            value: 0.0,
            err_est: 0.0,
        });
    }
    let t = tau.abs();
    let upper = tail_limit(z, 0.0);
    let h0 = (PI * PI / (20.0 + 0.5 * PI * t + width_scale(z))).min(0.5);
    let (s, diff, mass) = halving_trapezoid(
        |u| {
            Complex64::new(
                (-2.0 * z * (0.5 * u).sinh().powi(2)).exp() * (t * u).cos(),
                0.0,
            )
        },
        upper,
        h0,
    )?;
    let scale = (-z).exp();
    Ok(EvalResult {
        value: s.re * scale,
        err_est: (diff + 8.0 * EPS * mass) * scale,
    })
}

/// J_{i tau}(z) for real tau and 0 < z <= 100, |tau| <= 50, by the ascending
/// series.
pub fn bessel_j_imag_order(tau: f64, z: f64) -> Result<EvalResult<Complex64>> {
    if !(z > 0.0) || !z.is_finite() || !tau.is_finite() {
        return Err(Error::Domain(format!(
            "J_(i tau)(z) needs z > 0 (tau={tau}, z={z})"
        )));
    }
    if tau.abs() > J_MAX_ORDER || z > J_MAX_ARG {
        return Err(Error::Domain(format!(
            "J_(i tau)(z) outside |tau| <= {J_MAX_ORDER}, z <= {J_MAX_ARG} (tau={tau}, z={z})"
        )));
    }
    let t = tau.abs();
    let nu = Complex64::new(0.0, t);
    let lg = log_gamma(nu + 1.0)?;
    let log_pref = nu * (0.5 * z).ln() - lg;
    let pref = log_pref.exp();
    let q = 0.25 * z * z;

    // Neumaier-compensated sum of the series in (z/2)^{2k}.
    let (mut sr, mut si) = (1.0f64, 0.0f64);
    let (mut cr, mut ci) = (0.0f64, 0.0f64);
    let mut abs_sum = 1.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut k = 0usize;
    let remainder;
    loop {
        k += 1;
        let kf = k as f64;
        term = term * (-q) / (Complex64::new(kf, t) * kf);
        let tn = term.norm();
        abs_sum += tn;
        neumaier(&mut sr, &mut cr, term.re);
        neumaier(&mut si, &mut ci, term.im);
        if kf * kf > q {
            let ratio = q / ((kf + 1.0) * (kf + 1.0));
            if ratio < 1.0 {
                let bound = tn * ratio / (1.0 - ratio);
                let s = Complex64::new(sr + cr, si + ci).norm();
                if bound <= EPS * 0.01 * s.max(EPS * abs_sum) {
                    remainder = bound;
                    break;
                }
            }
        }
        if k > 10_000 {
            return Err(Error::NoConvergence {
                levels: k,
                last: sr,
                previous: sr,
            });
        }
    }
    let sum = Complex64::new(sr + cr, si + ci);
    let value = pref * sum;
    let pn = pref.norm();
    let err = pn * (remainder + 4.0 * EPS * abs_sum) + value.norm() * EPS * (4.0 + log_pref.norm());
    let value = if tau < 0.0 { value.conj() } else { value };
    Ok(EvalResult {
        value,
        err_est: err,
    })
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// K_nu(w) for real order nu >= 0 and complex w with Re w > 0, from
/// K_nu(w) = int_0^inf exp(-w cosh u) cosh(nu u) du.
pub fn macdonald_complex_arg(nu: f64, w: Complex64) -> Result<EvalResult<Complex64>> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!(
            "K_nu(w) needs real nu >= 0 (nu={nu})"
        )));
    }
    if !(w.re > 0.0) || !w.im.is_finite() || !w.re.is_finite() {
        return Err(Error::Domain(format!("K_nu(w) needs Re w > 0 (w={w})")));
    }
    if w.re > UNDERFLOW_ARG && nu * nu < w.re {
        // |K_nu(w)| <= K_nu(Re w), which is below the smallest subnormal
        return Ok(EvalResult {
            value: Complex64::new(0.0, 0.0),
            err_est: 0.0,
        });
    }
    let strip = 0.9 * (0.5 * PI - w.arg().abs());
    let upper = tail_limit(w.re, nu);
    let h0 = (2.0 * PI * strip / (20.0 + width_scale(w.norm()) + nu * strip)).min(0.5);
    let (s, diff, mass) = halving_trapezoid(
        |u| (-2.0 * w * (0.5 * u).sinh().powi(2)).exp() * (nu * u).cosh(),
        upper,
        h0,
    )?;
    let scale = (-w).exp();
    Ok(EvalResult {
        value: s * scale,
        err_est: (diff + 8.0 * EPS * mass) * scale.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k0_at_one() {
        let r = macdonald_imag_order(0.0, 1.0).unwrap();
        assert!((r.value - 0.421_024_438_240_708_3).abs() < 1e-15);
        assert!(r.err_est < 1e-13);
    }

    #[test]
    fn k_even_in_tau() {
        for &(t, z) in &[(0.7, 0.3), (3.0, 2.0), (12.0, 9.0)] {
            let a = macdonald_imag_order(t, z).unwrap().value;
            let b = macdonald_imag_order(-t, z).unwrap().value;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn k_half_order_closed_form() {
        // K_{1/2}(w) = sqrt(pi / (2 w)) e^{-w}
        for &(re, im) in &[(1.0, 1.0), (0.3, -0.2), (5.0, 4.0)] {
            let w = Complex64::new(re, im);
            let exact = (PI / (2.0 * w)).sqrt() * (-w).exp();
            let got = macdonald_complex_arg(0.5, w).unwrap();
            assert!((got.value - exact).norm() < 1e-13 * exact.norm().max(1.0));
        }
    }

    #[test]
    fn complex_arg_agrees_with_imag_order_on_real_axis() {
        let a = macdonald_complex_arg(0.0, Complex64::new(1.7, 0.0))
            .unwrap()
            .value;
        let b = macdonald_imag_order(0.0, 1.7).unwrap().value;
        assert!((a.re - b).abs() < 1e-15 && a.im.abs() < 1e-16);
    }

    #[test]
    fn complex_arg_rejects_left_half_plane() {
        assert!(macdonald_complex_arg(0.0, Complex64::new(-1.0, 1.0)).is_err());
        assert!(macdonald_complex_arg(0.0, Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn j_at_zero_order_is_j0() {
        let r = bessel_j_imag_order(0.0, 1.0).unwrap();
        assert!((r.value.re - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert_eq!(r.value.im, 0.0);
    }

    #[test]
    fn j_conjugate_in_tau() {
        let a = bessel_j_imag_order(1.5, 3.0).unwrap().value;
        let b = bessel_j_imag_order(-1.5, 3.0).unwrap().value;
        assert_eq!(a, b.conj());
    }

    #[test]
    fn j_envelope_enforced() {
        assert!(bessel_j_imag_order(51.0, 1.0).is_err());
        assert!(bessel_j_imag_order(1.0, 101.0).is_err());
        assert!(bessel_j_imag_order(1.0, 0.0).is_err());
    }

    #[test]
    fn small_argument_limit() {
        // J_{i tau}(z) ~ (z/2)^{i tau} / Gamma(1 + i tau) as z -> 0
        let z = 1e-6;
        let t = 2.0;
        let r = bessel_j_imag_order(t, z).unwrap().value;
        let nu = Complex64::new(0.0, t);
        let lead = (nu * (0.5 * z).ln() - log_gamma(nu + 1.0).unwrap()).exp();
        assert!((r - lead).norm() < 1e-12 * lead.norm());
    }
}
