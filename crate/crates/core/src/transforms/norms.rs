//! The K_0^2-weighted L_1 norm, weighted Lebesgue norms, the closed-form
//! bounds relating them to the transforms, and a truncated Hilbert-Schmidt
//! integral for the kernel.

use serde::Serialize;
use std::f64::consts::PI;

use super::adjoint::{adjoint_g, AdjointProfile};
use super::forward::forward_f_unchecked;
use super::function::{LebesgueParams, SampledFunction};
use crate::error::{Error, Result};
use crate::guard::Guard;
use crate::kernel::psi_auto;
use crate::quadrature::{
    gauss_legendre, integrate_function, integrate_interval, integrate_real_line,
    integrate_semi_infinite, Decay, QuadratureSpec,
};
use crate::specfun::{beta, log_gamma, macdonald_imag_order};
use crate::EvalResult;

/// Number of log-spaced samples for p = infinity norms and suprema.
pub const SUP_GRID_POINTS: usize = 10_000;
const SUP_GRID_RANGE: (f64, f64) = (1e-8, 1e8);
const PROFILE_RANGE: (f64, f64) = (1e-12, 20.0);

fn log_grid() -> impl Iterator<Item = f64> {
    let (a, b) = (SUP_GRID_RANGE.0.ln(), SUP_GRID_RANGE.1.ln());
    let n = SUP_GRID_POINTS;
    (0..n).map(move |k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
}

/// int_0^inf h, split at the breakpoints so kinks sit at panel ends.
fn integrate_split<H>(h: H, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<EvalResult<f64>>
where
    H: Fn(f64) -> f64,
{
    let mut value = 0.0;
    let mut err = 0.0;
    let mut left = 0.0;
    for &b in breakpoints.iter().filter(|&&b| b > 0.0) {
        let r = integrate_interval(&h, left, b, spec)?;
        value += r.value;
        err += r.err_est;
        left = b;
    }
    let r = if left == 0.0 {
        integrate_semi_infinite(&h, spec)?
    } else {
        integrate_semi_infinite(|y: f64| h(left + y), spec)?
    };
    Ok(EvalResult {
        value: value + r.value,
        err_est: err + r.err_est,
    })
}

fn k0_squared(x: f64) -> Result<EvalResult<f64>> {
    let k = macdonald_imag_order(0.0, (2.0 * x).sqrt())?;
    Ok(EvalResult {
        value: k.value * k.value,
        err_est: 2.0 * k.value.abs() * k.err_est,
    })
}

/// ||f||_{L0} = int_0^inf K_0^2(sqrt(2x)) |f(x)| dx.
pub fn norm_l0(f: &SampledFunction) -> Result<EvalResult<f64>> {
    if !(f.zero_exponent > -1.0) {
        return Err(Error::Divergence(format!(
            "f ~ x^{} is not integrable at the origin",
            f.zero_exponent
        )));
    }
    let guard = Guard::new();
    let r = integrate_split(
        |x| {
            let v = f.eval(x);
            if v == 0.0 {
                0.0
            } else {
                guard.take(k0_squared(x)) * v.abs()
            }
        },
        &f.breakpoints,
        &QuadratureSpec::default(),
    );
    guard.check()?;
    let r = r?;
    if !r.value.is_finite() {
        return Err(Error::Divergence(
            "K_0^2-weighted integral is not finite".into(),
        ));
    }
    Ok(r)
}

/// ||f||_{nu,p} = (int_0^inf x^{nu p - 1} |f(x)|^p dx)^{1/p}. For p = infinity
/// the essential supremum of |x^nu f(x)| is approximated by the maximum over
/// [`SUP_GRID_POINTS`] log-spaced points in [1e-8, 1e8].
pub fn norm_nu_p(f: &SampledFunction, params: LebesgueParams) -> Result<f64> {
    let LebesgueParams { nu, p, .. } = params;
    if p.is_infinite() {
        let m = log_grid()
            .map(|x| (x.powf(nu) * f.eval(x)).abs())
            .fold(0.0, f64::max);
        return Ok(m);
    }
    if !(nu + f.zero_exponent > 0.0) && f.eval(1e-300) != 0.0 {
        return Err(Error::Divergence(format!(
            "x^(nu p - 1)|f|^p is not integrable at 0 (nu = {nu}, f ~ x^{})",
            f.zero_exponent
        )));
    }
    if let Decay::Power { exponent } = f.decay {
        if !(nu < exponent) {
            return Err(Error::Divergence(format!(
                "x^(nu p - 1)|f|^p is not integrable at infinity (nu = {nu}, f ~ x^-{exponent})"
            )));
        }
    }
    let a = nu * p - 1.0;
    let r = integrate_split(
        |x| {
            let v = f.eval(x).abs();
            if v == 0.0 {
                0.0
            } else {
                (a * x.ln() + p * v.ln()).exp()
            }
        },
        &f.breakpoints,
        &QuadratureSpec::default(),
    )?;
    Ok(r.value.powf(1.0 / p))
}

/// ||g||_{L_p(R)} for a function on the whole line.
pub fn norm_lp_line(g: &SampledFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("need finite p >= 1 (got {p})")));
    }
    let r = integrate_real_line(
        |t: f64| {
            let v = g.eval(t).abs();
            if v == 0.0 {
                0.0
            } else {
                v.powf(p)
            }
        },
        &QuadratureSpec::default(),
    )?;
    Ok(r.value.powf(1.0 / p))
}

/// Gamma(a)^e for a > 0.
fn gamma_pow(a: f64, e: f64) -> Result<f64> {
    Ok((e * log_gamma(num_complex::Complex64::new(a, 0.0))?.re).exp())
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}

/// Closed form 2^{-2(1/p + nu)} [Gamma^{1/q}(2q(1-nu)) / (2q)^{2(1-nu)} B(1-nu, 1-nu)]^2
/// that circulates for ||f||_{L0} <= C ||f||_{nu,p}. It is too small:
/// f = e^{-x} at (0.5, 2) violates it. Kept to show that; use
/// [`embedding_constant`].
pub fn embedding_constant_full_beta(params: LebesgueParams) -> Result<f64> {
    let LebesgueParams { nu, p, q } = params;
    require(nu < 1.0 && p > 1.0, || {
        format!("needs nu < 1 and p > 1 (got nu={nu}, p={p})")
    })?;
    let inner = gamma_pow(2.0 * q * (1.0 - nu), 1.0 / q)? / (2.0 * q).powf(2.0 * (1.0 - nu))
        * beta(1.0 - nu, 1.0 - nu)?;
    Ok(2f64.powf(-2.0 * (1.0 / p + nu)) * inner * inner)
}

/// Embedding constant from Hoelder plus Minkowski in L_{2q}:
/// 2^{-nu-1/p-2} (2q)^{-2(1-nu)} Gamma^{1/q}(2q(1-nu)) B^2((1-nu)/2, (1-nu)/2).
pub fn embedding_constant(params: LebesgueParams) -> Result<f64> {
    let LebesgueParams { nu, p, q } = params;
    require(nu < 1.0 && p > 1.0, || {
        format!("needs nu < 1 and p > 1 (got nu={nu}, p={p})")
    })?;
    let b = beta(0.5 * (1.0 - nu), 0.5 * (1.0 - nu))?;
    Ok(2f64.powf(-nu - 1.0 / p - 2.0)
        * (2.0 * q).powf(-2.0 * (1.0 - nu))
        * gamma_pow(2.0 * q * (1.0 - nu), 1.0 / q)?
        * b
        * b)
}

/// p = 1 embedding constant sup_x K_0^2(sqrt(2x)) x^{1-nu}, over the log grid.
pub fn embedding_constant_p1(nu: f64) -> Result<f64> {
    require(nu < 1.0, || format!("needs nu < 1 (got {nu})"))?;
    let mut m: f64 = 0.0;
    for x in log_grid() {
        m = m.max(k0_squared(x)?.value * x.powf(1.0 - nu));
    }
    Ok(m)
}

/// ||Ff||_{L_p(R)} <= C ||f||_{nu,p} for p >= 2, nu < 1:
/// C = (pi^{1/p-1}/2) q^{2(nu-1)} Gamma^{2/q}(q(1-nu)) B(1-nu, 1-nu).
pub fn forward_lp_constant(params: LebesgueParams) -> Result<f64> {
    let LebesgueParams { nu, p, q } = params;
    require(nu < 1.0 && p >= 2.0, || {
        format!("needs nu < 1 and p >= 2 (got nu={nu}, p={p})")
    })?;
    let pi_pow = if p.is_infinite() {
        1.0 / PI
    } else {
        PI.powf(1.0 / p - 1.0)
    };
    Ok(0.5
        * pi_pow
        * q.powf(2.0 * (nu - 1.0))
        * gamma_pow(q * (1.0 - nu), 2.0 / q)?
        * beta(1.0 - nu, 1.0 - nu)?)
}

/// |(Gg)(x)| <= C x^{-1/(4p)} ||g||_p for 1 < p <= 2:
/// C = 2^{1/(4p)-1} p^{-1/(2p)} B(1/(4p), 1/(4p)). Returns C x^{-1/(4p)}.
pub fn adjoint_pointwise_constant(p: f64, x: f64) -> Result<f64> {
    require(p > 1.0 && p <= 2.0, || {
        format!("needs 1 < p <= 2 (got {p})")
    })?;
    require(x > 0.0, || format!("needs x > 0 (got {x})"))?;
    let a = 0.25 / p;
    Ok(2f64.powf(a - 1.0) * p.powf(-0.5 / p) * x.powf(-a) * beta(a, a)?)
}

/// ||Gg||_{nu,r} <= C ||g||_p for 1 < p <= 2, r >= 1, nu > 0:
/// C = 2^{nu-1+1/r-2/p} pi^{1/q-1} Gamma^{1/r}(2 nu r) Gamma^{2/p}(nu p)
///     / (r^{2 nu} Gamma^{1/p}(2 nu p)) B(nu, nu).
pub fn adjoint_norm_constant(nu: f64, p: f64, r: f64) -> Result<f64> {
    require(p > 1.0 && p <= 2.0 && r >= 1.0 && nu > 0.0, || {
        format!("needs 1 < p <= 2, r >= 1, nu > 0 (got nu={nu}, p={p}, r={r})")
    })?;
    let q = p / (p - 1.0);
    Ok(2f64.powf(nu - 1.0 + 1.0 / r - 2.0 / p)
        * PI.powf(1.0 / q - 1.0)
        * gamma_pow(2.0 * nu * r, 1.0 / r)?
        * gamma_pow(nu * p, 2.0 / p)?
        / (r.powf(2.0 * nu) * gamma_pow(2.0 * nu * p, 1.0 / p)?)
        * beta(nu, nu)?)
}

/// One evaluated inequality lhs <= rhs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

impl InequalityReport {
    fn new(label: String, lhs: f64, rhs: f64) -> Self {
        Self {
            label,
            lhs,
            rhs,
            satisfied: lhs <= rhs,
        }
    }
}

/// Which inequality [`bound_report`] evaluates. The first four take f on the
/// half line, the last two take g on the real line.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundSelector {
    /// ||f||_{L0} against [`embedding_constant_full_beta`] (or the p = 1 sup).
    EmbeddingFullBeta(LebesgueParams),
    /// ||f||_{L0} against [`embedding_constant`] (or the p = 1 sup).
    Embedding(LebesgueParams),
    /// |(Ff)(tau)| <= (4/pi) ||f||_{L0} at each tau.
    ForwardSup { taus: Vec<f64> },
    /// ||Ff||_{L_p(R)}, integrated over |tau| <= tau_end, against [`forward_lp_constant`].
    ForwardLp {
        params: LebesgueParams,
        tau_end: f64,
    },
    /// |(Gg)(x)| against [`adjoint_pointwise_constant`] at each x.
    AdjointPointwise { p: f64, xs: Vec<f64> },
    /// ||Gg||_{nu,r} against [`adjoint_norm_constant`].
    AdjointNorm { nu: f64, p: f64, r: f64 },
}

/// Evaluates both sides of the selected inequality for `func`.
pub fn bound_report(
    func: &SampledFunction,
    selector: &BoundSelector,
) -> Result<Vec<InequalityReport>> {
    match selector {
        BoundSelector::EmbeddingFullBeta(params) | BoundSelector::Embedding(params) => {
            let full_beta = matches!(selector, BoundSelector::EmbeddingFullBeta(_));
            let c = if params.p == 1.0 {
                embedding_constant_p1(params.nu)?
            } else if full_beta {
                embedding_constant_full_beta(*params)?
            } else {
                embedding_constant(*params)?
            };
            let lhs = norm_l0(func)?.value;
            let rhs = c * norm_nu_p(func, *params)?;
            let label = format!(
                "L0 embedding ({}) nu={} p={}",
                if full_beta {
                    "full-beta constant"
                } else {
                    "corrected constant"
                },
                params.nu,
                params.p
            );
            Ok(vec![InequalityReport::new(label, lhs, rhs)])
        }
        BoundSelector::ForwardSup { taus } => {
            let bound = 4.0 / PI * norm_l0(func)?.value;
            taus.iter()
                .map(|&t| {
                    let v = forward_f_unchecked(func, t)?.value;
                    Ok(InequalityReport::new(
                        format!("sup bound tau={t}"),
                        v.abs(),
                        bound,
                    ))
                })
                .collect()
        }
        BoundSelector::ForwardLp { params, tau_end } => {
            let c = forward_lp_constant(*params)?;
            require(*tau_end > 0.0, || "tau_end must be positive".into())?;
            let p = params.p;
            let (nodes, weights) = gauss_legendre(8);
            let panels = tau_end.ceil() as usize;
            let width = tau_end / panels as f64;
            let mut acc = 0.0f64;
            for k in 0..panels {
                let a = k as f64 * width;
                for (t, w) in nodes.iter().zip(&weights) {
                    let tau = a + 0.5 * width * (t + 1.0);
                    let v = forward_f_unchecked(func, tau)?.value.abs();
                    let vp = if p.is_infinite() { v } else { v.powf(p) };
                    acc = if p.is_infinite() {
                        acc.max(vp)
                    } else {
                        acc + 0.5 * width * w * vp
                    };
                }
            }
            let lhs = if p.is_infinite() {
                acc
            } else {
                (2.0 * acc).powf(1.0 / p)
            };
            let rhs = c * norm_nu_p(func, *params)?;
            Ok(vec![InequalityReport::new(
                format!(
                    "forward L_p bound nu={} p={} |tau|<={tau_end}",
                    params.nu, p
                ),
                lhs,
                rhs,
            )])
        }
        BoundSelector::AdjointPointwise { p, xs } => {
            let gp = norm_lp_line(func, *p)?;
            xs.iter()
                .map(|&x| {
                    let rhs = adjoint_pointwise_constant(*p, x)? * gp;
                    let lhs = adjoint_g(func, x)?.value.abs();
                    Ok(InequalityReport::new(
                        format!("adjoint pointwise bound p={p} x={x}"),
                        lhs,
                        rhs,
                    ))
                })
                .collect()
        }
        BoundSelector::AdjointNorm { nu, p, r } => {
            let rhs = adjoint_norm_constant(*nu, *p, *r)? * norm_lp_line(func, *p)?;
            let a = nu * r - 1.0;
            // The Mellin-side profile is cheap to evaluate; past PROFILE_RANGE.1
            // its noise floor swamps G and the direct integral takes over. G
            // has a finite limit at the origin, so below PROFILE_RANGE.0 it is
            // frozen at its value there.
            let (x0, x1) = PROFILE_RANGE;
            let profile = AdjointProfile::for_weighted(func, 0.0, false)?;
            let guard = Guard::new();
            let g_at = |x: f64| -> f64 {
                if x > x1 {
                    guard.take(adjoint_g(func, x))
                } else {
                    guard.take(profile.eval(x, 0))
                }
            };
            let term = |x: f64, v: f64| {
                if v == 0.0 {
                    0.0
                } else {
                    (a * x.ln() + r * v.abs().ln()).exp()
                }
            };
            let head = term(x0, g_at(x0)) * x0 / (a + 1.0);
            let s = integrate_semi_infinite(
                |v: f64| {
                    let x = x0 + 0.5 * v * v;
                    if !x.is_finite() {
                        return 0.0;
                    }
                    term(x, g_at(x)) * v
                },
                &QuadratureSpec::default().with_rel_tol(1e-8),
            );
            guard.check()?;
            let s = s?.value + head;
            let lhs = s.powf(1.0 / r);
            Ok(vec![InequalityReport::new(
                format!("adjoint norm bound nu={nu} p={p} r={r}"),
                lhs,
                rhs,
            )])
        }
    }
}

/// Truncated Hilbert-Schmidt integral of the kernel and a bound on what the
/// truncation leaves out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HilbertSchmidtDiagnostic {
    /// int_0^trunc int_{-trunc}^{trunc} |Psi_tau(x)|^q x^{(1-nu)q-1} dtau dx
    pub value: f64,
    /// Upper bound for the rest of the quadrant.
    pub tail_bound: f64,
}

/// Diagnostic for int_0^inf int_R |Psi_tau(x)|^q x^{(1-nu)q-1} dtau dx,
/// 1 < p <= 2, nu < 1, truncated to x <= trunc, |tau| <= trunc.
pub fn hilbert_schmidt_diagnostic(
    params: LebesgueParams,
    trunc: f64,
) -> Result<HilbertSchmidtDiagnostic> {
    let LebesgueParams { nu, p, q } = params;
    require(p > 1.0 && p <= 2.0 && nu < 1.0, || {
        format!("needs 1 < p <= 2 and nu < 1 (got nu={nu}, p={p})")
    })?;
    require(trunc > 0.0 && trunc.is_finite(), || {
        format!("trunc must be positive (got {trunc})")
    })?;
    let c = (1.0 - nu) * q - 1.0;
    let (nodes, weights) = gauss_legendre(10);
    let panels = (2.0 * trunc).ceil() as usize;
    let width = trunc / panels as f64;
    let spec = QuadratureSpec::default().with_rel_tol(1e-9);
    let guard = Guard::new();
    let inner = |x: f64| -> f64 {
        let mut acc = 0.0;
        for k in 0..panels {
            let a = k as f64 * width;
            for (t, w) in nodes.iter().zip(&weights) {
                let tau = a + 0.5 * width * (t + 1.0);
                acc += 0.5 * width * w * guard.take(psi_auto(tau, x)).abs().powf(q);
            }
        }
        2.0 * acc
    };
    let r = integrate_interval(|x: f64| inner(x) * x.powf(c), 0.0, trunc, &spec);
    guard.check()?;
    let value = r?.value;

    // |Psi_tau(x)| <= (4/pi) e^{-delta |tau|} K_0^2(a sqrt x), a = cos(delta/2) sqrt(2 cos delta)
    let delta = 1.2_f64;
    let a = (0.5 * delta).cos() * (2.0 * delta.cos()).sqrt();
    let guard = Guard::new();
    let k_term = |x: f64| {
        let k = guard.take(macdonald_imag_order(0.0, a * x.sqrt()));
        (4.0 / PI * k * k).powf(q) * x.powf(c)
    };
    let whole = integrate_function(&k_term, Decay::SqrtExponential { rate: 2.0 * q * a }, &spec);
    let beyond = integrate_semi_infinite(|y: f64| k_term(trunc + y), &spec);
    guard.check()?;
    let tau_mass = 2.0 / (delta * q);
    let tail_bound =
        tau_mass * (-delta * q * trunc).exp() * whole?.value + tau_mass * beyond?.value;
    Ok(HilbertSchmidtDiagnostic { value, tail_bound })
}
