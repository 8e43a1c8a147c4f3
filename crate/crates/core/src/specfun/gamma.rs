//! Complex log-gamma (principal branch) and the real beta function.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// B_{2k} / (2k (2k-1)) for k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Shift until |z| reaches this radius before applying the Stirling series.
const STIRLING_RADIUS: f64 = 15.0;

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        series = series * inv2 + *c;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series * inv
}

/// log Gamma for Re z >= 0.5.
fn log_gamma_right(z: Complex64) -> Complex64 {
    let mut n = 0usize;
    while (z + n as f64).norm() < STIRLING_RADIUS {
        n += 1;
    }
    if n == 0 {
        return stirling(z);
    }
    // Every factor has positive real part, so each pair has |arg| < pi and
    // the principal log of the pair product equals the sum of the two logs.
    let mut acc = Complex64::new(0.0, 0.0);
    let mut k = 0usize;
    while k + 1 < n {
        let a = z + k as f64;
        acc += (a * (a + 1.0)).ln();
        k += 2;
    }
    if k < n {
        acc += (z + k as f64).ln();
    }
    stirling(z + n as f64) - acc
}

/// log sin(pi z) up to a multiple of 2 pi i, without overflow for large |Im z|.
fn log_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 1.0 {
        return (z * PI).sin().ln();
    }
    let w = if z.im > 0.0 { z } else { z.conj() };
    // sin(pi w) = (i/2) e^{-i pi w} (1 - e^{2 pi i w})
    let i = Complex64::i();
    let e = (i * 2.0 * PI * w).exp();
    let v = Complex64::new(-std::f64::consts::LN_2, PI / 2.0) - i * PI * w + (1.0 - e).ln();
    if z.im > 0.0 {
        v
    } else {
        v.conj()
    }
}

fn is_pole(z: Complex64) -> bool {
    if z.re > 0.5 {
        return false;
    }
    let r = z.re.round();
    let scale = z.re.abs().max(1.0);
    (z.re - r).abs() <= 1e-14 * scale && z.im.abs() <= 1e-14 * scale
}

/// Principal branch of log Gamma(z).
///
/// The branch is the one continuous on the plane cut along the non-positive
/// real axis, so that `log_gamma(z + 1) = log_gamma(z) + ln z`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("log_gamma of non-finite {z}")));
    }
    if is_pole(z) {
        return Err(Error::PoleOfGamma { re: z.re, im: z.im });
    }
    if z.re >= 0.5 {
        return Ok(log_gamma_right(z));
    }
    let n = (0.5 - z.re).ceil();
    if n > 1e6 {
        return Err(Error::Domain(format!(
            "log_gamma: Re z = {} too negative",
            z.re
        )));
    }
    let n = n as usize;
    let reflected = Complex64::new(LN_PI, 0.0) - log_sin_pi(z) - log_gamma_right(1.0 - z);
    // Imaginary part of the principal branch from the downward recurrence.
    let mut args = 0.0;
    for k in 0..n {
        args += (z + k as f64).arg();
    }
    let target = log_gamma_right(z + n as f64).im - args;
    let turns = ((target - reflected.im) / (2.0 * PI)).round();
    Ok(Complex64::new(
        reflected.re,
        reflected.im + 2.0 * PI * turns,
    ))
}

/// Gamma(z) for complex z.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// Beta function B(a, b) for a, b > 0.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "beta requires a, b > 0 (got {a}, {b})"
        )));
    }
    let l = log_gamma(Complex64::new(a, 0.0))?.re + log_gamma(Complex64::new(b, 0.0))?.re
        - log_gamma(Complex64::new(a + b, 0.0))?.re;
    Ok(l.exp())
}
