//! Double-exponential rules: exp-sinh on (0, inf), sinh-sinh on the real
//! line and tanh-sinh on finite intervals.

use std::f64::consts::FRAC_PI_2;

use super::{QuadValue, QuadratureSpec, EPS};
use crate::error::{Error, Result};
use crate::EvalResult;

const H0: f64 = 0.5;
const T_MAX: f64 = 6.5;
/// Terms below this fraction of the largest term end the level-0 scan.
const NEGLIGIBLE: f64 = 1e-20;

#[derive(Clone, Copy)]
enum Map {
    ExpSinh,
    SinhSinh,
    TanhSinh { a: f64, b: f64 },
}

impl Map {
    /// Abscissa and Jacobian at parameter t.
    fn node(self, t: f64) -> (f64, f64) {
        let u = FRAC_PI_2 * t.sinh();
        let du = FRAC_PI_2 * t.cosh();
        match self {
            Map::ExpSinh => {
                let x = u.exp();
                (x, x * du)
            }
            Map::SinhSinh => (u.sinh(), u.cosh() * du),
            Map::TanhSinh { a, b } => {
                let half = 0.5 * (b - a);
                // 1 - tanh|u| computed without cancellation
                let e = (-2.0 * u.abs()).exp();
                let gap = 2.0 * e / (1.0 + e);
                let x = if u >= 0.0 {
                    b - half * gap
                } else {
                    a + half * gap
                };
                let sech = 2.0 * (-u.abs()).exp() / (1.0 + e);
                (x, half * du * sech * sech)
            }
        }
    }
}

/// Node rounded onto (or past) an end of a finite interval.
fn clipped(map: Map, t: f64) -> bool {
    match map {
        Map::TanhSinh { a, b } => {
            let x = map.node(t).0;
            x <= a || x >= b
        }
        _ => false,
    }
}

fn term<V: QuadValue, F: Fn(f64) -> V>(f: &F, map: Map, t: f64) -> Option<V> {
    let (x, w) = map.node(t);
    if w == 0.0 || !x.is_finite() || !w.is_finite() {
        return Some(V::default());
    }
    if let Map::TanhSinh { a, b } = map {
        if x <= a || x >= b {
            return Some(V::default());
        }
    }
    let v = f(x) * w;
    if v.magnitude().is_finite() {
        Some(v)
    } else {
        None
    }
}

fn integrate<V, F>(f: F, map: Map, spec: &QuadratureSpec) -> Result<EvalResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let kmax = (T_MAX / H0) as i64;
    let centre = term(&f, map, 0.0).ok_or(Error::NonFinite {
        at: map.node(0.0).0,
    })?;
    let mut raw = centre;
    let mut mass = centre.magnitude();
    let mut peak = mass;
    // Level-0 scan in each direction fixes the truncation range.
    let mut ends = [0i64; 2];
    // Mass the rule cannot see because the nodes have run into an endpoint
    // while the terms were still significant (e.g. (1 - x)^{-1/2} at x = 1).
    // Refining does not shrink it, so it only widens the reported estimate.
    let mut clip_tail = 0.0f64;
    for (side, dir) in [1i64, -1].into_iter().enumerate() {
        let mut quiet = 0;
        let mut k = 0;
        let mut last = mass;
        while k < kmax {
            k += 1;
            let t = (dir * k) as f64 * H0;
            if clipped(map, t) {
                if last > NEGLIGIBLE * peak {
                    clip_tail += last * H0;
                }
            }
            let v = match term(&f, map, t) {
                Some(v) => v,
                None if t.abs() > 3.0 => {
                    k -= 1;
                    break;
                }
                None => return Err(Error::NonFinite { at: map.node(t).0 }),
            };
            raw += v;
            let m = v.magnitude();
            mass += m;
            peak = peak.max(m);
            last = m;
            if m <= NEGLIGIBLE * peak {
                quiet += 1;
                if quiet == 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        ends[side] = k;
    }
    let t_hi = ends[0] as f64 * H0;
    let t_lo = -(ends[1] as f64) * H0;
    let mut h = H0;
    let mut prev = raw * h;
    let mut prev_diff = f64::INFINITY;
    let mut last_diff = f64::INFINITY;
    for level in 1..spec.max_levels {
        h *= 0.5;
        let n_lo = (t_lo / h).floor() as i64;
        let n_hi = (t_hi / h).ceil() as i64;
        let mut j = n_lo + if n_lo.rem_euclid(2) == 0 { 1 } else { 0 };
        while j <= n_hi {
            let t = j as f64 * h;
            let v = term(&f, map, t).ok_or(Error::NonFinite { at: map.node(t).0 })?;
            raw += v;
            mass += v.magnitude();
            j += 2;
        }
        let cur = raw * h;
        let diff = (cur - prev).magnitude();
        let predicted = if prev_diff.is_finite() && prev_diff > 0.0 {
            (diff * diff / prev_diff).min(diff)
        } else {
            diff
        };
        let err = predicted.max(4.0 * EPS * mass * h);
        if level >= 2 && spec.accepts(err, cur.magnitude(), mass * h) {
            return Ok(EvalResult {
                value: cur,
                err_est: err + clip_tail,
            });
        }
        prev = cur;
        prev_diff = diff;
        last_diff = diff;
    }
    Err(Error::NoConvergence {
        levels: spec.max_levels,
        last: prev.magnitude(),
        previous: prev.magnitude() + last_diff,
    })
}

/// int_0^inf f(x) dx by the exp-sinh rule.
pub fn integrate_semi_infinite<V, F>(f: F, spec: &QuadratureSpec) -> Result<EvalResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    integrate(f, Map::ExpSinh, spec)
}

/// int_{-inf}^{inf} f(x) dx by the sinh-sinh rule.
pub fn integrate_real_line<V, F>(f: F, spec: &QuadratureSpec) -> Result<EvalResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    integrate(f, Map::SinhSinh, spec)
}

/// int_a^b f(x) dx by the tanh-sinh rule. Endpoint singularities are allowed.
pub fn integrate_interval<V, F>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<EvalResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "finite interval required (got [{a}, {b}])"
        )));
    }
    if a == b {
        return Ok(EvalResult {
            value: V::default(),
            err_est: 0.0,
        });
    }
    if a > b {
        let r = integrate(f, Map::TanhSinh { a: b, b: a }, spec)?;
        return Ok(EvalResult {
            value: r.value * -1.0,
            err_est: r.err_est,
        });
    }
    integrate(f, Map::TanhSinh { a, b }, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn polynomial_times_exponential() {
        // int_0^inf x^n e^{-x} dx = n!
        let mut fact = 1.0;
        for n in 0..=10 {
            if n > 0 {
                fact *= n as f64;
            }
            let r = integrate_semi_infinite(|x: f64| x.powi(n) * (-x).exp(), &spec()).unwrap();
            assert!((r.value - fact).abs() <= 1e-12 * fact, "n={n}: {}", r.value);
        }
    }

    #[test]
    fn log_squared_endpoint() {
        // int_0^inf ln^2(x) e^{-x} dx = gamma_E^2 + pi^2 / 6
        let euler = 0.577_215_664_901_532_9;
        let exact = euler * euler + PI * PI / 6.0;
        let r = integrate_semi_infinite(|x: f64| x.ln().powi(2) * (-x).exp(), &spec()).unwrap();
        assert!((r.value - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn real_line_gaussian() {
        let r = integrate_real_line(|x: f64| (-x * x).exp(), &spec()).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn interval_with_endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let r = integrate_interval(|x: f64| x.powf(-0.5), 0.0, 1.0, &spec()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let back = integrate_interval(|x: f64| x.powf(-0.5), 1.0, 0.0, &spec()).unwrap();
        assert!((back.value + 2.0).abs() < 1e-12);
    }

    #[test]
    fn complex_valued() {
        // int_0^inf e^{-(1 - i) x} dx = 1 / (1 - i)
        let z = Complex64::new(1.0, -1.0);
        let r = integrate_semi_infinite(|x: f64| (-z * x).exp(), &spec()).unwrap();
        assert!((r.value - z.inv()).norm() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_reports_estimates() {
        let tight = QuadratureSpec::new(1e-30, 1e-300, 3).unwrap();
        match integrate_semi_infinite(|x: f64| (-x).exp() * (10.0 * x).sin().abs(), &tight) {
            Err(Error::NoConvergence { levels, .. }) => assert_eq!(levels, 3),
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }
}
