//! The fixed invariant suite behind `besselidx verify`.
//!
//! Every check is deterministic: fixed nodes, a seeded generator for the
//! random samples and no timing data, so two runs give identical reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::golden::{check_all, GoldenFile, GoldenOutcome};
use crate::kernel::{
    check_bound_delta, index_integral_check, ode_residual, psi_direct, psi_fourier,
    psi_mellin_barnes,
};
use crate::quadrature::ContourSpec;
use crate::transforms::{
    adjoint_g, adjoint_g_fourier_route, bound_report, canonical_f, canonical_f_mellin, canonical_g,
    forward_f, forward_f_composition, forward_f_mellin, invert_f_grid, invert_g, AdjointProfile,
    BoundSelector, InversionOptions,
};
use crate::wedge_pde::{
    decay_check, initial_condition_check, InitialConditionMode, ThetaProfiles, WedgeParams,
};

pub const KERNEL_TAUS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
pub const KERNEL_XS: [f64; 3] = [0.25, 1.0, 4.0];
pub const ADJOINT_XS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
pub const ROUND_TRIP_XS: [f64; 3] = [0.5, 1.0, 2.0];
pub const IDENTITY_XS: [f64; 3] = [0.5, 1.0, 2.0];
pub const IDENTITY_US: [f64; 3] = [0.0, 0.5, 1.0];
pub const PDE_RS: [f64; 3] = [0.5, 1.0, 2.0];
pub const PDE_THETAS: [f64; 3] = [0.1, 0.3, 0.6];
pub const PDE_BETA: f64 = 1.4;
pub const DELTAS: [f64; 3] = [0.0, 0.7, 1.2];
pub const DEFAULT_SEED: u64 = 0x5eed_b55e;
pub const DEFAULT_SAMPLES: usize = 1000;

/// One line of the verification report. `metric` is compared against
/// `threshold` with `<=`. Records with `gating == false` are diagnostics:
/// reported, but they do not decide the overall outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub metric: f64,
    pub threshold: f64,
    pub passed: bool,
    pub gating: bool,
    pub detail: String,
}

impl CheckRecord {
    fn new(name: &str, metric: f64, threshold: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            metric,
            threshold,
            passed: metric <= threshold,
            gating: true,
            detail,
        }
    }

    fn diagnostic(mut self) -> Self {
        self.gating = false;
        self
    }

    fn failed(name: &str, threshold: f64, err: impl std::fmt::Display) -> Self {
        Self {
            name: name.to_string(),
            metric: f64::INFINITY,
            threshold,
            passed: false,
            gating: true,
            detail: format!("error: {err}"),
        }
    }
}

fn record(name: &str, threshold: f64, r: Result<(f64, String)>) -> CheckRecord {
    match r {
        Ok((m, d)) => CheckRecord::new(name, m, threshold, d),
        Err(e) => CheckRecord::failed(name, threshold, e),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// Largest relative spread between the Psi routes on the fixed grid:
/// direct against Fourier (<= 1e-8) and each against Mellin-Barnes (<= 1e-6).
pub fn kernel_route_agreement() -> Vec<CheckRecord> {
    let spreads = || -> Result<(f64, f64)> {
        let contour = ContourSpec::default();
        let (mut df, mut mb) = (0.0f64, 0.0f64);
        for &t in &KERNEL_TAUS {
            for &x in &KERNEL_XS {
                let d = psi_direct(t, x)?.value;
                let f = psi_fourier(t, x)?.value;
                let m = psi_mellin_barnes(t, x, &contour)?.value;
                df = df.max(rel(d, f));
                mb = mb.max(rel(d, m)).max(rel(f, m));
            }
        }
        Ok((df, mb))
    };
    match spreads() {
        Ok((df, mb)) => vec![
            CheckRecord::new(
                "kernel direct vs fourier",
                df,
                1e-8,
                "max relative spread, 12 nodes".into(),
            ),
            CheckRecord::new(
                "kernel vs mellin-barnes",
                mb,
                1e-6,
                "max relative spread, 12 nodes".into(),
            ),
        ],
        Err(e) => vec![
            CheckRecord::failed("kernel direct vs fourier", 1e-8, &e),
            CheckRecord::failed("kernel vs mellin-barnes", 1e-6, &e),
        ],
    }
}

/// |Psi_tau(x)| against its delta-envelopes at `samples` seeded points,
/// tau uniform in [-10, 10] and x log-uniform in [1e-2, 1e2]. The metric is
/// the number of violations.
pub fn inequality_samples(seed: u64, samples: usize) -> CheckRecord {
    let run = || -> Result<(f64, String)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut violations = 0usize;
        let mut tightest = f64::INFINITY;
        for _ in 0..samples {
            let tau: f64 = rng.gen_range(-10.0..10.0);
            let x = 10f64.powf(rng.gen_range(-2.0..2.0));
            for &d in &DELTAS {
                let c = check_bound_delta(tau, x, d)?;
                if !c.satisfied {
                    violations += 1;
                }
                if c.rhs > 0.0 {
                    tightest = tightest.min((c.rhs - c.lhs) / c.rhs);
                }
            }
        }
        Ok((
            violations as f64,
            format!(
                "{} checks, seed {seed}, smallest relative margin {tightest:.3e}",
                samples * DELTAS.len()
            ),
        ))
    };
    record("kernel envelope inequalities", 0.0, run())
}

/// Normalized residual of the fourth-order ODE in x on the kernel grid.
pub fn ode_check() -> CheckRecord {
    let run = || -> Result<(f64, String)> {
        let contour = ContourSpec::default();
        let mut worst = 0.0f64;
        for &t in &KERNEL_TAUS {
            for &x in &KERNEL_XS {
                worst = worst.max(ode_residual(t, x, &contour)?.normalized);
            }
        }
        Ok((worst, "max normalized residual, 12 nodes".into()))
    };
    record("kernel ode residual", 1e-8, run())
}

/// Both sides of the cosine index integral of Psi.
pub fn index_identity_check() -> CheckRecord {
    let run = || -> Result<(f64, String)> {
        let mut worst = 0.0f64;
        for &x in &IDENTITY_XS {
            for &u in &IDENTITY_US {
                let c = index_integral_check(x, u)?;
                worst = worst.max((c.lhs.value - c.rhs.value).abs());
            }
        }
        Ok((worst, "max absolute difference, 9 nodes".into()))
    };
    record("index integral identity", 1e-6, run())
}

/// The three forward routes for f = (1 - x) e^{-x}, and the sup bound by the
/// L0 norm.
pub fn forward_triangle() -> Vec<CheckRecord> {
    let spread = || -> Result<(f64, String)> {
        let f = canonical_f();
        let contour = ContourSpec::default();
        let mut worst = 0.0f64;
        for &t in &KERNEL_TAUS {
            let a = forward_f(&f, t)?.value;
            let b = forward_f_mellin(canonical_f_mellin, t, &contour)?.value;
            let c = forward_f_composition(&f, t)?.value;
            worst = worst.max(rel(a, b)).max(rel(a, c)).max(rel(b, c));
        }
        Ok((worst, "max pairwise relative spread, 4 nodes".into()))
    };
    let bound = || -> Result<(f64, String)> {
        let r = bound_report(
            &canonical_f(),
            &BoundSelector::ForwardSup {
                taus: KERNEL_TAUS.to_vec(),
            },
        )?;
        let worst = r.iter().map(|c| c.lhs / c.rhs).fold(0.0, f64::max);
        Ok((worst, "max |Ff| / ((4/pi) ||f||_L0)".into()))
    };
    vec![
        record("forward route triangle", 1e-6, spread()),
        record("forward sup bound", 1.0, bound()),
    ]
}

/// Adjoint transform of g = tau^2 e^{-tau^2} by both routes, and the
/// pointwise L2 bound.
pub fn adjoint_pair() -> Vec<CheckRecord> {
    let diff = || -> Result<(f64, String)> {
        let g = canonical_g();
        let mut worst = 0.0f64;
        for &x in &ADJOINT_XS {
            let a = adjoint_g(&g, x)?.value;
            let b = adjoint_g_fourier_route(&g, x)?.value;
            worst = worst.max((a - b).abs());
        }
        Ok((worst, "max absolute difference, 4 nodes".into()))
    };
    let bound = || -> Result<(f64, String)> {
        let r = bound_report(
            &canonical_g(),
            &BoundSelector::AdjointPointwise {
                p: 2.0,
                xs: ADJOINT_XS.to_vec(),
            },
        )?;
        let worst = r.iter().map(|c| c.lhs / c.rhs).fold(0.0, f64::max);
        Ok((worst, "max |Gg(x)| / bound at p = 2".into()))
    };
    vec![
        record("adjoint route pair", 1e-6, diff()),
        record("adjoint pointwise bound", 1.0, bound()),
    ]
}

/// Recovery of f = (1 - x) e^{-x} from its forward transform. Errors are
/// relative to max |f| over the nodes, since f vanishes at x = 1. The second
/// record, a diagnostic, compares the estimated tail beyond the tau cutoff
/// with the value. For this f the inversion integrand decays only like
/// e^{-0.074 tau}, so the tail estimate stays large.
pub fn round_trip_f() -> Vec<CheckRecord> {
    let run = || -> Result<(f64, f64, String)> {
        let contour = ContourSpec::default();
        let fvals = |t: f64| forward_f_mellin(canonical_f_mellin, t, &contour).map(|r| r.value);
        let rs = invert_f_grid(fvals, &ROUND_TRIP_XS, &InversionOptions::default())?;
        let f = canonical_f();
        let scale = ROUND_TRIP_XS
            .iter()
            .map(|&x| f.eval(x).abs())
            .fold(0.0, f64::max);
        let (mut err, mut tail) = (0.0f64, 0.0f64);
        let mut parts = Vec::new();
        for (&x, r) in ROUND_TRIP_XS.iter().zip(rs) {
            let r = r?;
            err = err.max((r.value - f.eval(x)).abs() / scale);
            tail = tail.max(r.tail_mass / scale);
            parts.push(format!("x={x}: {:.6e}", r.value));
        }
        Ok((err, tail, parts.join(", ")))
    };
    match run() {
        Ok((err, tail, detail)) => vec![
            CheckRecord::new("forward round trip", err, 1e-3, detail),
            CheckRecord::new(
                "forward round trip tail monitor",
                tail,
                1e-6,
                "estimated tail mass / max |f|".into(),
            )
            .diagnostic(),
        ],
        Err(e) => vec![
            CheckRecord::failed("forward round trip", 1e-3, &e),
            CheckRecord::failed("forward round trip tail monitor", 1e-6, &e).diagnostic(),
        ],
    }
}

/// Recovery of g = tau^2 e^{-tau^2} from the derivative of its adjoint
/// transform. The tail record bounds the discarded part by the error
/// estimate of the y-integral.
pub fn round_trip_g() -> Vec<CheckRecord> {
    let run = || -> Result<(f64, f64, String)> {
        let g = canonical_g();
        let profile = AdjointProfile::for_weighted(&g, 0.0, false)?;
        let gprime = |y: f64| profile.eval(y, 1).map(|r| r.value);
        let scale = ROUND_TRIP_XS
            .iter()
            .map(|&x| g.eval(x).abs())
            .fold(0.0, f64::max);
        let (mut err, mut tail) = (0.0f64, 0.0f64);
        let mut parts = Vec::new();
        for &x in &ROUND_TRIP_XS {
            let r = invert_g(gprime, x)?;
            err = err.max((r.value - g.eval(x)).abs() / scale);
            tail = tail.max(r.err_est / r.value.abs());
            parts.push(format!("x={x}: {:.6e}", r.value));
        }
        Ok((err, tail, parts.join(", ")))
    };
    match run() {
        Ok((err, tail, detail)) => vec![
            CheckRecord::new("adjoint round trip", err, 1e-3, detail),
            CheckRecord::new(
                "adjoint round trip tail monitor",
                tail,
                1e-6,
                "error estimate / value".into(),
            )
            .diagnostic(),
        ],
        Err(e) => vec![
            CheckRecord::failed("adjoint round trip", 1e-3, &e),
            CheckRecord::failed("adjoint round trip tail monitor", 1e-6, &e).diagnostic(),
        ],
    }
}

/// Residual of the wedge equation on the 3x3 grid, the initial condition
/// by both modes, and decay of u between r = 0.5 and r = 10.
pub fn pde_checks() -> Vec<CheckRecord> {
    let params = match WedgeParams::new(PDE_BETA, canonical_g()) {
        Ok(p) => p,
        Err(e) => {
            return ["wedge pde residual", "wedge initial condition (same path)"]
                .iter()
                .map(|n| CheckRecord::failed(n, 0.0, &e))
                .collect()
        }
    };
    let residual = || -> Result<(f64, String)> {
        let mut worst = 0.0f64;
        for &th in &PDE_THETAS {
            let prof = ThetaProfiles::new(&params, th)?;
            for &r in &PDE_RS {
                worst = worst.max(prof.residual(r)?.normalized);
            }
        }
        Ok((worst, "max normalized residual, 9 nodes".into()))
    };
    let ic = |mode| -> Result<(f64, String)> {
        Ok((
            initial_condition_check(&params, &PDE_RS, mode)?,
            "max |u(r, 0) - Gg(r)|".into(),
        ))
    };
    let decay = || -> Result<(f64, String)> {
        let mut worst = 0.0f64;
        for &th in &PDE_THETAS {
            let d = decay_check(&params, th, 0.5, 10.0, 1e-3)?;
            worst = worst.max(d.far.abs() / d.near.abs());
        }
        Ok((worst, "max |u(10, theta)| / |u(0.5, theta)|".into()))
    };
    vec![
        record("wedge pde residual", 1e-4, residual()),
        record(
            "wedge initial condition (same path)",
            1e-10,
            ic(InitialConditionMode::SamePath),
        ),
        record(
            "wedge initial condition (independent)",
            1e-8,
            ic(InitialConditionMode::Independent),
        ),
        record("wedge decay", 1e-3, decay()),
    ]
}

/// Golden entries as one record; the per-entry outcomes go alongside.
pub fn golden_check(file: &GoldenFile) -> Result<(CheckRecord, Vec<GoldenOutcome>)> {
    let outcomes = check_all(file)?;
    let failures = outcomes.iter().filter(|o| !o.passed).count();
    let worst = outcomes
        .iter()
        .filter_map(|o| o.abs_err.map(|e| e / o.tolerance))
        .fold(0.0, f64::max);
    Ok((
        CheckRecord::new(
            "golden regression",
            failures as f64,
            0.0,
            format!(
                "{} entries, worst error / tolerance {worst:.3e}",
                outcomes.len()
            ),
        ),
        outcomes,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckRecord>,
    pub golden: Vec<GoldenOutcome>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub golden: Option<GoldenFile>,
    pub seed: u64,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            golden: None,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
        }
    }
}

/// Runs every check in a fixed order. Errors inside a check become failed
/// records; only a malformed golden file aborts the run.
pub fn run_suite(opts: &SuiteOptions) -> Result<VerifyReport> {
    let mut checks = kernel_route_agreement();
    checks.push(inequality_samples(opts.seed, opts.samples));
    checks.push(ode_check());
    checks.push(index_identity_check());
    checks.extend(forward_triangle());
    checks.extend(adjoint_pair());
    checks.extend(round_trip_f());
    checks.extend(round_trip_g());
    checks.extend(pde_checks());
    let mut golden = Vec::new();
    if let Some(file) = &opts.golden {
        let (c, outcomes) = golden_check(file)?;
        checks.push(c);
        golden = outcomes;
    }
    let passed = checks.iter().filter(|c| c.gating).all(|c| c.passed);
    Ok(VerifyReport {
        checks,
        golden,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::bundled_golden;

    #[test]
    fn cheap_checks_pass() {
        for c in kernel_route_agreement()
            .into_iter()
            .chain([ode_check(), index_identity_check()])
            .chain(forward_triangle())
            .chain(adjoint_pair())
        {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn samples_are_seeded() {
        let a = inequality_samples(7, 20);
        let b = inequality_samples(7, 20);
        assert_eq!(a, b);
        assert!(a.passed, "{a:?}");
    }

    #[test]
    fn golden_record() {
        let (c, outcomes) = golden_check(&bundled_golden()).unwrap();
        assert!(c.passed, "{c:?}");
        assert_eq!(outcomes.len(), bundled_golden().entries.len());
    }

    #[test]
    fn failing_metric_is_reported() {
        let c = CheckRecord::new("x", 2.0, 1.0, String::new());
        assert!(!c.passed);
        let c = CheckRecord::new("x", f64::NAN, 1.0, String::new());
        assert!(!c.passed);
        assert!(
            !CheckRecord::new("x", 2.0, 1.0, String::new())
                .diagnostic()
                .gating
        );
    }
}
