use rayon::prelude::*;

use besselidx::golden::{bundled_golden, check_all, load_golden, GoldenFile};
use besselidx::kernel::{psi_direct, psi_fourier, psi_mellin_barnes, Route};
use besselidx::transforms::{
    adjoint_g, adjoint_g_fourier_route, canonical_f, canonical_f_mellin, canonical_g, forward_f,
    forward_f_composition, forward_f_mellin, invert_f_grid, invert_g, AdjointProfile,
    InversionOptions,
};
use besselidx::verification::{run_suite, SuiteOptions};
use besselidx::wedge_pde::{wedge_u, PolarPoint, ThetaProfiles, WedgeParams};
use besselidx::EvalResult;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{emit_report, emit_table, Cell, Table};

/// Largest relative error accepted by the round-trip modes of `invert`.
pub const ROUND_TRIP_TOL: f64 = 1e-3;
/// Largest normalized residual accepted by `pde`.
pub const PDE_TOL: f64 = 1e-4;

fn pool(cfg: &RunConfig) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Domain(format!("thread pool: {e}")))
}

/// Runs `f` over the items on the worker pool; results keep input order.
fn fan_out<T, R, F>(cfg: &RunConfig, items: &[T], f: F) -> Result<Vec<R>, CliError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, CliError> + Sync + Send,
{
    pool(cfg)?.install(|| items.par_iter().map(f).collect())
}

fn agree(cfg: &RunConfig, a: &EvalResult<f64>, b: &EvalResult<f64>) -> bool {
    let scale = a.value.abs().max(b.value.abs());
    let allowed = (cfg.rel_tol * scale)
        .max(cfg.abs_tol)
        .max(a.err_est + b.err_est);
    (a.value - b.value).abs() <= allowed
}

/// Checks every pair of routes within each group of rows.
fn check_groups(
    cfg: &RunConfig,
    groups: &[Vec<(String, EvalResult<f64>)>],
    label: impl Fn(usize) -> String,
) -> Result<(), CliError> {
    for (i, rows) in groups.iter().enumerate() {
        for (j, (ra, a)) in rows.iter().enumerate() {
            for (rb, b) in &rows[j + 1..] {
                if !agree(cfg, a, b) {
                    return Err(CliError::Tolerance(format!(
                        "{ra} and {rb} disagree at {}: {:e} vs {:e}",
                        label(i),
                        a.value,
                        b.value
                    )));
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteChoice {
    One(Route),
    All,
}

pub fn cmd_kernel(
    cfg: &RunConfig,
    taus: &[f64],
    xs: &[f64],
    route: RouteChoice,
) -> Result<(), CliError> {
    let contour = cfg.contour();
    let routes = match route {
        RouteChoice::One(r) => vec![r],
        RouteChoice::All => vec![Route::Direct, Route::Fourier, Route::MellinBarnes],
    };
    let points: Vec<(f64, f64)> = taus
        .iter()
        .flat_map(|&t| xs.iter().map(move |&x| (t, x)))
        .collect();
    let groups = fan_out(cfg, &points, |&(t, x)| {
        let mut rows = Vec::new();
        for &r in &routes {
            let v = match r {
                Route::Direct => psi_direct(t, x),
                Route::Fourier => psi_fourier(t, x),
                Route::MellinBarnes => psi_mellin_barnes(t, x, &contour),
            };
            match v {
                Ok(v) => rows.push((r.to_string(), v)),
                // with every route requested, the direct one may sit out below its range
                Err(besselidx::Error::RouteUnavailable(_)) if route == RouteChoice::All => {}
                Err(e) => return Err(e.into()),
            }
        }
        Ok(rows)
    })?;
    let mut table = Table::new(&["tau", "x", "route", "value", "err_est"]);
    for (&(t, x), rows) in points.iter().zip(&groups) {
        for (r, v) in rows {
            table.push(vec![
                t.into(),
                x.into(),
                r.as_str().into(),
                v.value.into(),
                v.err_est.into(),
            ]);
        }
    }
    emit_table(cfg, &table)?;
    check_groups(cfg, &groups, |i| {
        format!("tau={}, x={}", points[i].0, points[i].1)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Forward,
    Adjoint,
}

/// Transforms of the built-in test functions: f = (1 - x) e^{-x} forward,
/// g = tau^2 e^{-tau^2} adjoint.
pub fn cmd_transform(
    cfg: &RunConfig,
    kind: TransformKind,
    points: &[f64],
    route: Option<&str>,
) -> Result<(), CliError> {
    let contour = cfg.contour();
    let (header, routes): (&'static str, Vec<&str>) = match kind {
        TransformKind::Forward => ("tau", vec!["direct", "mellin-barnes", "composition"]),
        TransformKind::Adjoint => ("x", vec!["direct", "fourier"]),
    };
    let routes: Vec<&str> = match route {
        None | Some("all") => routes,
        Some(r) if routes.contains(&r) => vec![r],
        Some(r) => {
            return Err(CliError::Domain(format!(
                "route '{r}' is not one of {} or all",
                routes.join(", ")
            )))
        }
    };
    let (f, g) = (canonical_f(), canonical_g());
    let groups = fan_out(cfg, points, |&p| {
        routes
            .iter()
            .map(|&r| {
                let v = match (kind, r) {
                    (TransformKind::Forward, "direct") => forward_f(&f, p),
                    (TransformKind::Forward, "mellin-barnes") => {
                        forward_f_mellin(canonical_f_mellin, p, &contour)
                    }
                    (TransformKind::Forward, _) => forward_f_composition(&f, p),
                    (TransformKind::Adjoint, "direct") => adjoint_g(&g, p),
                    (TransformKind::Adjoint, _) => adjoint_g_fourier_route(&g, p),
                }?;
                Ok((r.to_string(), v))
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    let mut table = Table::new(&[header, "route", "value", "err_est"]);
    for (&p, rows) in points.iter().zip(&groups) {
        for (r, v) in rows {
            table.push(vec![
                p.into(),
                r.as_str().into(),
                v.value.into(),
                v.err_est.into(),
            ]);
        }
    }
    emit_table(cfg, &table)?;
    check_groups(cfg, &groups, |i| format!("{header}={}", points[i]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvertMode {
    RoundTripF,
    RoundTripG,
}

/// Transforms a built-in function and inverts it again at `xs`. Errors are
/// relative to the largest |exact value| over `xs`.
pub fn cmd_invert(cfg: &RunConfig, mode: InvertMode, xs: &[f64]) -> Result<(), CliError> {
    let mut table = Table::new(&["x", "value", "expected", "abs_err", "err_est", "tail_mass"]);
    let (exact, rows): (Box<dyn Fn(f64) -> f64>, Vec<(f64, f64, Option<f64>)>) = match mode {
        InvertMode::RoundTripF => {
            let contour = cfg.contour();
            let fvals = |t: f64| forward_f_mellin(canonical_f_mellin, t, &contour).map(|r| r.value);
            let rs = invert_f_grid(fvals, xs, &InversionOptions::default())?;
            let rows = rs
                .into_iter()
                .map(|r| r.map(|r| (r.value, r.err_est, Some(r.tail_mass))))
                .collect::<Result<Vec<_>, _>>()?;
            let f = canonical_f();
            (Box::new(move |x| f.eval(x)), rows)
        }
        InvertMode::RoundTripG => {
            let g = canonical_g();
            let profile = AdjointProfile::for_weighted(&g, 0.0, false)?;
            let rows = fan_out(cfg, xs, |&x| {
                let r = invert_g(|y: f64| profile.eval(y, 1).map(|r| r.value), x)?;
                Ok((r.value, r.err_est, None))
            })?;
            (Box::new(move |x| g.eval(x)), rows)
        }
    };
    let scale = xs.iter().map(|&x| exact(x).abs()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for (&x, &(v, err, tail)) in xs.iter().zip(&rows) {
        let e = exact(x);
        worst = worst.max((v - e).abs());
        table.push(vec![
            x.into(),
            v.into(),
            e.into(),
            (v - e).abs().into(),
            err.into(),
            Cell::from(tail),
        ]);
    }
    emit_table(cfg, &table)?;
    let rel = if scale > 0.0 { worst / scale } else { worst };
    eprintln!("max relative error {rel:.3e} (limit {ROUND_TRIP_TOL:e})");
    if rel <= ROUND_TRIP_TOL {
        Ok(())
    } else {
        Err(CliError::Tolerance(format!(
            "round trip error {rel:e} exceeds {ROUND_TRIP_TOL:e}"
        )))
    }
}

/// u(r, theta) and the residual of the wedge equation for the built-in
/// boundary data g = tau^2 e^{-tau^2}.
pub fn cmd_pde(cfg: &RunConfig, beta: f64, rs: &[f64], thetas: &[f64]) -> Result<(), CliError> {
    let params = WedgeParams::new(beta, canonical_g())?;
    for &t in thetas {
        for &r in rs {
            PolarPoint::new(r, t, &params)?;
        }
    }
    let per_theta = fan_out(cfg, thetas, |&th| {
        let prof = ThetaProfiles::new(&params, th)?;
        rs.iter()
            .map(|&r| {
                let u = wedge_u(&params, PolarPoint::new(r, th, &params)?)?;
                let res = prof.residual(r)?;
                Ok((u, res.normalized))
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    let mut table = Table::new(&["r", "theta", "u", "err_est", "residual"]);
    let mut worst = 0.0f64;
    for (&th, rows) in thetas.iter().zip(&per_theta) {
        for (&r, (u, res)) in rs.iter().zip(rows) {
            worst = worst.max(*res);
            table.push(vec![
                r.into(),
                th.into(),
                u.value.into(),
                u.err_est.into(),
                (*res).into(),
            ]);
        }
    }
    emit_table(cfg, &table)?;
    if worst <= PDE_TOL {
        Ok(())
    } else {
        Err(CliError::Tolerance(format!(
            "pde residual {worst:e} exceeds {PDE_TOL:e}"
        )))
    }
}

fn golden_file(cfg: &RunConfig) -> Result<GoldenFile, CliError> {
    match &cfg.golden {
        Some(path) => Ok(load_golden(path)?),
        None => Ok(bundled_golden()),
    }
}

pub fn cmd_verify(cfg: &RunConfig, seed: u64, samples: usize) -> Result<(), CliError> {
    let golden = golden_file(cfg)?;
    let report = run_suite(&SuiteOptions {
        golden: Some(golden),
        seed,
        samples,
    })?;
    let mut table = Table::new(&["name", "metric", "threshold", "passed", "gating", "detail"]);
    for c in &report.checks {
        eprintln!(
            "{:<40} {:>10.3e} <= {:<8.1e} {}{}",
            c.name,
            c.metric,
            c.threshold,
            if c.passed { "ok" } else { "FAIL" },
            if c.gating { "" } else { " (diagnostic)" }
        );
        table.push(vec![
            c.name.as_str().into(),
            c.metric.into(),
            c.threshold.into(),
            c.passed.into(),
            c.gating.into(),
            c.detail.as_str().into(),
        ]);
    }
    emit_report(cfg, &report, &table)?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.gating && !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Tolerance(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}

pub fn cmd_golden_check(cfg: &RunConfig) -> Result<(), CliError> {
    let golden = golden_file(cfg)?;
    let outcomes = check_all(&golden)?;
    let mut table = Table::new(&[
        "op",
        "inputs",
        "expected",
        "computed",
        "abs_err",
        "tolerance",
        "passed",
    ]);
    for o in &outcomes {
        table.push(vec![
            o.op.as_str().into(),
            o.inputs.as_str().into(),
            o.expected.into(),
            o.computed.into(),
            o.abs_err.into(),
            o.tolerance.into(),
            o.passed.into(),
        ]);
    }
    emit_report(cfg, &outcomes, &table)?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    eprintln!(
        "{} of {} entries reproduced",
        outcomes.len() - failed,
        outcomes.len()
    );
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Tolerance(format!(
            "{failed} golden entries out of tolerance"
        )))
    }
}
