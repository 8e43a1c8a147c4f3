//! Trapezoid rule on the vertical line Re s = gamma.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{QuadratureSpec, EPS};
use crate::error::{Error, Result};
use crate::EvalResult;

/// Line Re s = gamma, truncated at |Im s| <= height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub gamma: f64,
    /// Truncation height. `None` picks it from the integrand magnitude.
    pub height: Option<f64>,
    /// Initial node density; doubled until the sums agree.
    pub nodes_per_unit: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self {
            gamma: 0.25,
            height: None,
            nodes_per_unit: 8.0,
        }
    }
}

impl ContourSpec {
    pub fn with_gamma(gamma: f64) -> Self {
        Self {
            gamma,
            ..Self::default()
        }
    }

    /// Height where the Stirling envelope |t|^{power} e^{-pi |t| / 2} falls
    /// below `abs_tol / margin`, shifted by `shift`.
    pub fn stirling_height(power: f64, abs_tol: f64, margin: f64, shift: f64) -> f64 {
        let target = (abs_tol / margin).ln();
        let mut t: f64 = 1.0;
        while power * t.ln() - 0.5 * PI * t > target && t < 1e4 {
            t += 1.0;
        }
        t + shift.abs()
    }
}

/// Relative level below the observed peak at which the line is truncated.
const TAIL_FRACTION: f64 = 1e-18;
const MAX_HEIGHT: f64 = 20_000.0;

/// (1 / 2 pi i) int_{gamma - i inf}^{gamma + i inf} g(s) x^{-s} ds.
pub fn integrate_contour<G>(
    g: G,
    contour: &ContourSpec,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<EvalResult<Complex64>>
where
    G: Fn(Complex64) -> Complex64,
{
    integrate_contour_with_hint(g, contour, x, spec, 0.0)
}

/// As [`integrate_contour`]; an automatic height is at least `min_height`,
/// which should cover the region where the integrand is largest.
pub fn integrate_contour_with_hint<G>(
    g: G,
    contour: &ContourSpec,
    x: f64,
    spec: &QuadratureSpec,
    min_height: f64,
) -> Result<EvalResult<Complex64>>
where
    G: Fn(Complex64) -> Complex64,
{
    let mut out = integrate_contour_multi(g, contour, &[x], spec, min_height)?;
    Ok(out.remove(0))
}

/// The integral of [`integrate_contour`] at several x at once. `g` is
/// evaluated once per node; the height and node density are shared, and
/// refinement continues until every x is accepted.
pub fn integrate_contour_multi<G>(
    g: G,
    contour: &ContourSpec,
    xs: &[f64],
    spec: &QuadratureSpec,
    min_height: f64,
) -> Result<Vec<EvalResult<Complex64>>>
where
    G: Fn(Complex64) -> Complex64,
{
    if let Some(&x) = xs.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::Domain(format!(
            "contour integral needs x > 0 (got {x})"
        )));
    }
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    if !(contour.nodes_per_unit > 0.0 && contour.nodes_per_unit.is_finite()) {
        return Err(Error::Domain("nodes_per_unit must be positive".into()));
    }
    let lxs: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let m = xs.len();
    let gamma = contour.gamma;
    // (g(s) x^{-s} for each x) at s = gamma + i t
    let h_of = |t: f64, out: &mut [Complex64]| {
        let s = Complex64::new(gamma, t);
        let v = g(s);
        for (o, lx) in out.iter_mut().zip(&lxs) {
            *o = v * (-s * lx).exp();
        }
    };
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mut probe = |t: f64| {
        let mut worst: f64 = 0.0;
        for tt in [t, -t] {
            h_of(tt, &mut buf);
            for v in &buf {
                worst = worst.max(v.norm());
            }
        }
        worst
    };

    let height = match contour.height {
        Some(t_end) => {
            if !(t_end > 0.0) {
                return Err(Error::Domain("contour height must be positive".into()));
            }
            let mag = probe(t_end);
            if !(mag * spec.truncation_margin <= spec.abs_tol) {
                return Err(Error::TruncationInsufficient {
                    height: t_end,
                    magnitude: mag,
                });
            }
            t_end
        }
        None => {
            let t0 = min_height.max(4.0).ceil();
            let mut peak: f64 = 0.0;
            let mut t = 0.0;
            while t <= t0 {
                peak = peak.max(probe(t));
                t += 0.5;
            }
            let mut t = t0;
            let mut quiet = 0;
            loop {
                t += 1.0;
                let mag = probe(t);
                if !mag.is_finite() {
                    return Err(Error::NonFinite { at: t });
                }
                peak = peak.max(mag);
                if mag <= TAIL_FRACTION * peak {
                    quiet += 1;
                    if quiet == 3 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                if t > MAX_HEIGHT {
                    return Err(Error::TruncationInfeasible(format!(
                        "contour integrand still {mag:e} at height {t}"
                    )));
                }
            }
            t
        }
    };

    let zero = Complex64::new(0.0, 0.0);
    let (mut a, mut b) = (vec![zero; m], vec![zero; m]);
    let mut raw = vec![zero; m];
    let mut mass = vec![0.0; m];
    let mut add = |t: f64, raw: &mut [Complex64], mass: &mut [f64]| {
        h_of(t, &mut a);
        h_of(-t, &mut b);
        for i in 0..m {
            raw[i] += a[i] + b[i];
            mass[i] += a[i].norm() + b[i].norm();
        }
    };
    let mut h = 1.0 / contour.nodes_per_unit;
    let mut n = (height / h).ceil() as i64;
    h_of(0.0, &mut raw);
    for i in 0..m {
        mass[i] = raw[i].norm();
    }
    for k in 1..=n {
        add(k as f64 * h, &mut raw, &mut mass);
    }
    let scale = 1.0 / (2.0 * PI);
    let mut prev: Vec<Complex64> = raw.iter().map(|r| r * h * scale).collect();
    let mut prev_diff = vec![f64::INFINITY; m];
    for _ in 1..spec.max_levels {
        h *= 0.5;
        n *= 2;
        for k in (1..n).step_by(2) {
            add(k as f64 * h, &mut raw, &mut mass);
        }
        let mut done = true;
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let cur = raw[i] * h * scale;
            let diff = (cur - prev[i]).norm();
            if !diff.is_finite() {
                return Err(Error::NonFinite { at: height });
            }
            let predicted = if prev_diff[i].is_finite() && prev_diff[i] > 0.0 {
                (10.0 * diff * diff / prev_diff[i]).min(diff)
            } else {
                diff
            };
            let floor = 4.0 * EPS * mass[i] * h * scale;
            let err = predicted.max(floor);
            done &= spec.accepts(err, cur.norm(), mass[i] * h * scale);
            out.push(EvalResult {
                value: cur,
                err_est: err,
            });
            prev[i] = cur;
            prev_diff[i] = diff;
        }
        if done {
            return Ok(out);
        }
    }
    let worst = (0..m)
        .max_by(|&i, &j| prev_diff[i].total_cmp(&prev_diff[j]))
        .unwrap_or(0);
    Err(Error::NoConvergence {
        levels: spec.max_levels,
        last: prev[worst].norm(),
        previous: prev[worst].norm() + prev_diff[worst],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::log_gamma;

    #[test]
    fn cahen_mellin_exponential() {
        // (1 / 2 pi i) int Gamma(s) x^{-s} ds = e^{-x}
        for &x in &[0.3, 1.0, 4.0] {
            let r = integrate_contour(
                |s| log_gamma(s).unwrap().exp(),
                &ContourSpec::with_gamma(1.0),
                x,
                &QuadratureSpec::default(),
            )
            .unwrap();
            assert!((r.value.re - (-x as f64).exp()).abs() < 1e-13, "x={x}");
            assert!(r.value.im.abs() < 1e-13);
        }
    }

    #[test]
    fn insufficient_height_detected() {
        let c = ContourSpec {
            height: Some(2.0),
            ..ContourSpec::with_gamma(1.0)
        };
        let r = integrate_contour(
            |s| log_gamma(s).unwrap().exp(),
            &c,
            1.0,
            &QuadratureSpec::default(),
        );
        assert!(matches!(r, Err(Error::TruncationInsufficient { .. })));
    }

    #[test]
    fn explicit_height_matches_automatic() {
        let g = |s: Complex64| log_gamma(s).unwrap().exp();
        let auto = integrate_contour(
            g,
            &ContourSpec::with_gamma(1.0),
            2.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        let c = ContourSpec {
            height: Some(ContourSpec::stirling_height(0.5, 1e-15, 10.0, 0.0)),
            ..ContourSpec::with_gamma(1.0)
        };
        let fixed = integrate_contour(g, &c, 2.0, &QuadratureSpec::default()).unwrap();
        assert!((auto.value - fixed.value).norm() < 1e-13);
    }
}
