//! Inversion of both transforms.
//!
//! f(x) = -(8/pi) int_0^inf tau sinh(pi tau / 2) (Ff)(tau) d/dx Phi_tau(x) dtau
//! g(x) = (4/pi) x sinh(pi x / 2) int_0^inf Phi_x(y) (Gg)'(y) dy

use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::guard::Guard;
use crate::kernel::{phi_contour, phi_derivative_x, phi_derivative_x_multi, phi_direct};
use crate::quadrature::{gauss_kronrod15, integrate_semi_infinite, ContourSpec, QuadratureSpec};
use crate::specfun::{macdonald_imag_order, J_MAX_ARG, J_MAX_ORDER};
use crate::EvalResult;

/// How d/dx enters the tau-integral of [`invert_f`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    /// d/dx Phi from its contour integral, under the tau-integral.
    Inside,
    /// Central difference of the undifferentiated integral, h = 1e-4 max(x, 1).
    /// Limited to tau <= 50, where the Bessel product is available.
    OuterDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InversionOptions {
    /// Upper end of the tau-integral.
    pub tau_end: f64,
    pub mode: DerivativeMode,
    /// Contour for d/dx Phi (abscissa in (0, 1)).
    pub contour: ContourSpec,
    /// Largest acceptable tail mass beyond `tau_end`. A tail that cannot be
    /// bounded (no power-law decay visible) is always an error.
    pub tail_tolerance: f64,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self {
            tau_end: 160.0,
            mode: DerivativeMode::Inside,
            contour: phi_contour(),
            tail_tolerance: f64::INFINITY,
        }
    }
}

/// Value of an inversion with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InversionResult {
    pub value: f64,
    /// Quadrature error over [0, truncation] (Kronrod against Gauss).
    pub err_est: f64,
    /// Estimated int |integrand| over (truncation, inf), from a power-law fit
    /// to the last two windows. Cancellation makes the true tail much smaller.
    pub tail_mass: f64,
    pub truncation: f64,
}

const PANEL: f64 = 1.0;
/// Panels per window for the decay fit.
const WINDOW: usize = 8;

/// Panel-by-panel GK15 over [0, tau_end] with a power-law tail estimate.
/// `integrand(k)` returns the 15 integrand values on panel k.
fn panel_integral<I>(mut integrand: I, tau_end: f64, tail_tolerance: f64) -> Result<InversionResult>
where
    I: FnMut(usize) -> Result<[f64; 15]>,
{
    let panels = (tau_end / PANEL).ceil() as usize;
    if panels < 2 * WINDOW {
        return Err(Error::Domain(format!(
            "tau_end {tau_end} is too short for the tail fit"
        )));
    }
    let mut maxima = Vec::with_capacity(panels);
    let mut kron = 0.0;
    let mut err = 0.0;
    let mut end = panels;
    for k in 0..panels {
        let nodes = gauss_kronrod15(k as f64 * PANEL, (k + 1) as f64 * PANEL);
        let vals = integrand(k)?;
        let (mut pk, mut pg, mut m) = (0.0, 0.0, 0.0f64);
        for (v, (_, wk, wg)) in vals.iter().zip(nodes.iter()) {
            pk += wk * v;
            pg += wg * v;
            m = m.max(v.abs());
        }
        kron += pk;
        err += (pk - pg).abs();
        maxima.push(m);
        let peak = maxima.iter().cloned().fold(0.0, f64::max);
        if k + 1 >= 2 * WINDOW && maxima[k + 1 - WINDOW..].iter().all(|&a| a < 1e-12 * peak) {
            end = k + 1;
            break;
        }
    }
    let truncation = end as f64 * PANEL;
    let win_max = |hi: usize| maxima[hi - WINDOW..hi].iter().cloned().fold(0.0, f64::max);
    let a2 = win_max(end);
    let tail_mass = if end < panels || a2 == 0.0 {
        // stopped on a negligible envelope
        a2 * WINDOW as f64 * PANEL
    } else {
        let a1 = win_max(end / 2);
        let p = (a1 / a2).log2();
        if p > 1.0 {
            a2 * truncation / (p - 1.0)
        } else {
            f64::INFINITY
        }
    };
    if tail_mass > tail_tolerance || !tail_mass.is_finite() {
        return Err(Error::TailDominance {
            tail: tail_mass,
            value: kron,
        });
    }
    Ok(InversionResult {
        value: kron,
        err_est: err,
        tail_mass,
        truncation,
    })
}

/// -(8/pi) tau sinh(pi tau / 2), the inversion weight in front of F d/dx Phi.
fn tau_weight(tau: f64) -> f64 {
    -8.0 / PI * tau * (FRAC_PI_2 * tau).sinh()
}

fn check_options(opts: &InversionOptions) -> Result<()> {
    if !(opts.tau_end > 0.0 && opts.tau_end.is_finite()) {
        return Err(Error::Domain(format!(
            "tau_end must be positive (got {})",
            opts.tau_end
        )));
    }
    if opts.mode == DerivativeMode::OuterDifference && opts.tau_end > J_MAX_ORDER {
        return Err(Error::Domain(format!(
            "finite-difference mode needs tau_end <= {J_MAX_ORDER} (got {})",
            opts.tau_end
        )));
    }
    Ok(())
}

fn phi_weighted_derivative(tau: f64, x: f64, opts: &InversionOptions) -> Result<f64> {
    match opts.mode {
        DerivativeMode::Inside => Ok(phi_derivative_x(tau, x, &opts.contour)?.value),
        DerivativeMode::OuterDifference => {
            let h = 1e-4 * x.max(1.0);
            let a = phi_direct(tau, x + h)?.value;
            let b = phi_direct(tau, x - h)?.value;
            Ok((a - b) / (2.0 * h))
        }
    }
}

fn check_x(x: f64, opts: &InversionOptions) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("x must be positive (got {x})")));
    }
    if opts.mode == DerivativeMode::OuterDifference && x <= 1e-4 {
        return Err(Error::Domain(
            "finite-difference stencil leaves the half line".into(),
        ));
    }
    Ok(())
}

/// Recovers f(x) from tau -> (Ff)(tau), x > 0.
pub fn invert_f<F>(fvals: F, x: f64, opts: &InversionOptions) -> Result<InversionResult>
where
    F: Fn(f64) -> Result<f64>,
{
    check_options(opts)?;
    check_x(x, opts)?;
    panel_integral(
        |k| {
            let nodes = gauss_kronrod15(k as f64 * PANEL, (k + 1) as f64 * PANEL);
            let mut out = [0.0; 15];
            for (o, (tau, _, _)) in out.iter_mut().zip(nodes.iter()) {
                let fv = fvals(*tau)?;
                *o = if fv == 0.0 {
                    0.0
                } else {
                    tau_weight(*tau) * fv * phi_weighted_derivative(*tau, x, opts)?
                };
            }
            Ok(out)
        },
        opts.tau_end,
        opts.tail_tolerance,
    )
}

/// [`invert_f`] at several x, evaluating (Ff)(tau) once per node. In the
/// default mode the derivative of Phi is also shared across x.
pub fn invert_f_grid<F>(
    fvals: F,
    xs: &[f64],
    opts: &InversionOptions,
) -> Result<Vec<Result<InversionResult>>>
where
    F: Fn(f64) -> Result<f64>,
{
    check_options(opts)?;
    let panels = (opts.tau_end / PANEL).ceil() as usize;
    let mut table = Vec::with_capacity(panels);
    for k in 0..panels {
        let nodes = gauss_kronrod15(k as f64 * PANEL, (k + 1) as f64 * PANEL);
        let mut row = [0.0; 15];
        for (o, (tau, _, _)) in row.iter_mut().zip(nodes.iter()) {
            *o = fvals(*tau)?;
        }
        table.push(row);
    }
    let good: Vec<f64> = xs
        .iter()
        .copied()
        .filter(|&x| check_x(x, opts).is_ok())
        .collect();
    // derivative[k][i][j] at node i of panel k and x = good[j]
    let derivative = if opts.mode == DerivativeMode::Inside && !good.is_empty() {
        let mut d = Vec::with_capacity(panels);
        for (k, row) in table.iter().enumerate() {
            let nodes = gauss_kronrod15(k as f64 * PANEL, (k + 1) as f64 * PANEL);
            let mut cols = Vec::with_capacity(15);
            for i in 0..15 {
                cols.push(if row[i] == 0.0 {
                    vec![0.0; good.len()]
                } else {
                    phi_derivative_x_multi(nodes[i].0, &good, &opts.contour)?
                        .into_iter()
                        .map(|r| r.value)
                        .collect()
                });
            }
            d.push(cols);
        }
        Some(d)
    } else {
        None
    };
    let mut slot = 0;
    Ok(xs
        .iter()
        .map(|&x| {
            check_x(x, opts)?;
            let j = slot;
            slot += 1;
            panel_integral(
                |k| {
                    let nodes = gauss_kronrod15(k as f64 * PANEL, (k + 1) as f64 * PANEL);
                    let mut out = [0.0; 15];
                    for i in 0..15 {
                        let (tau, fv) = (nodes[i].0, table[k][i]);
                        if fv == 0.0 {
                            continue;
                        }
                        let dphi = match &derivative {
                            Some(d) => d[k][i][j],
                            None => phi_weighted_derivative(tau, x, opts)?,
                        };
                        out[i] = tau_weight(tau) * fv * dphi;
                    }
                    Ok(out)
                },
                opts.tau_end,
                opts.tail_tolerance,
            )
        })
        .collect())
}

/// Phi_tau(y) for use inside the y-integral of [`invert_g`]: zero with an
/// error bar once K_{i tau}(2 sqrt(2y)) is negligible.
fn phi_auto(tau: f64, y: f64) -> Result<EvalResult<f64>> {
    let z = 2.0 * (2.0 * y).sqrt();
    if z > J_MAX_ARG {
        return Ok(EvalResult {
            value: 0.0,
            err_est: phi_envelope(tau, y)?,
        });
    }
    phi_direct(tau, y)
}

/// Largest |x| accepted by [`invert_g`].
pub const INVERT_G_MAX: f64 = 50.0;

/// The density is sampled on [Y_FLOOR, inf); the piece below is dropped and
/// charged to the error estimate, which assumes (Gg)' is bounded near 0.
pub const Y_FLOOR: f64 = 1e-12;

/// Recovers g(x) from the density (Gg)'(y), for real x with |x| <= 50.
/// g(0) = 0; g is even in x.
pub fn invert_g<D>(gprime: D, x: f64) -> Result<EvalResult<f64>>
where
    D: Fn(f64) -> Result<f64>,
{
    if !x.is_finite() || x.abs() > INVERT_G_MAX {
        return Err(Error::Domain(format!(
            "|x| must be at most {INVERT_G_MAX} (got {x})"
        )));
    }
    let t = x.abs();
    if t == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            err_est: 0.0,
        });
    }
    let guard = Guard::new();
    let density = |y: f64| {
        guard.take(gprime(y).map(|v| EvalResult {
            value: v,
            err_est: 0.0,
        }))
    };
    // y = Y_FLOOR + v^2 / 2 absorbs the e^{-c sqrt y} decay
    let r = integrate_semi_infinite(
        |v: f64| {
            let y = Y_FLOOR + 0.5 * v * v;
            let d = density(y);
            if d == 0.0 {
                0.0
            } else {
                guard.take(phi_auto(t, y)) * d * v
            }
        },
        &QuadratureSpec::default().with_rel_tol(1e-10),
    );
    // near 0, Phi_t oscillates in log y with amplitude about
    // |Gamma(i t)| / |Gamma(1 + i t)| = 1/t
    let amplitude = phi_direct(t, Y_FLOOR)?.value.abs() + 1.0 / t;
    let dropped = 2.0 * Y_FLOOR * density(Y_FLOOR).abs() * amplitude;
    guard.check()?;
    let r = r?;
    let pre = 4.0 / PI * t * (FRAC_PI_2 * t).sinh();
    Ok(EvalResult {
        value: pre * r.value,
        err_est: pre * (r.err_est + dropped),
    })
}

/// |Phi_tau(y)| <= K_0(z) (cosh(pi tau) + sinh(pi |tau|) / (pi z)), z = 2 sqrt(2y).
fn phi_envelope(tau: f64, y: f64) -> Result<f64> {
    let z = 2.0 * (2.0 * y).sqrt();
    let k0 = macdonald_imag_order(0.0, z)?.value;
    Ok(k0 * ((PI * tau).cosh() + (PI * tau.abs()).sinh() / (PI * z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_input() {
        let r = invert_f(|_| Ok(0.0), 1.0, &InversionOptions::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.tail_mass, 0.0);
        let g = invert_g(|_| Ok(0.0), 1.0).unwrap();
        assert_eq!(g.value, 0.0);
    }

    #[test]
    fn invert_g_domain() {
        assert_eq!(invert_g(|_| Ok(1.0), 0.0).unwrap().value, 0.0);
        assert!(invert_g(|_| Ok(1.0), 60.0).is_err());
    }

    #[test]
    fn outer_difference_range() {
        let opts = InversionOptions {
            mode: DerivativeMode::OuterDifference,
            ..Default::default()
        };
        assert!(invert_f(|_| Ok(0.0), 1.0, &opts).is_err());
    }
}
