use approx::assert_relative_eq;
use besselidx::quadrature::{
    gauss_legendre, integrate_contour, integrate_interval, integrate_real_line,
    integrate_semi_infinite,
};
use besselidx::{ContourSpec, QuadratureSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

#[test]
fn semi_infinite_oracles() {
    let spec = QuadratureSpec::default();
    let r = integrate_semi_infinite(|x: f64| (-x).exp(), &spec).unwrap();
    assert_relative_eq!(r.value, 1.0, max_relative = 1e-13);
    // endpoint singularity
    let r = integrate_semi_infinite(|x: f64| (-x).exp() / x.sqrt(), &spec).unwrap();
    assert_relative_eq!(r.value, PI.sqrt(), max_relative = 1e-12);
    // -Euler gamma
    let r = integrate_semi_infinite(|x: f64| x.ln() * (-x).exp(), &spec).unwrap();
    assert_relative_eq!(r.value, -0.57721566490153286061, max_relative = 1e-12);
    assert!(r.err_est < 1e-10);
}

#[test]
fn real_line_and_interval() {
    let spec = QuadratureSpec::default();
    let r = integrate_real_line(|x: f64| (-x * x).exp(), &spec).unwrap();
    assert_relative_eq!(r.value, PI.sqrt(), max_relative = 1e-13);
    let r = integrate_interval(|x: f64| (x * (2.0 - x)).sqrt(), 0.0, 2.0, &spec).unwrap();
    assert_relative_eq!(r.value, 0.5 * PI, max_relative = 1e-12);
    // Nodes next to x = 1 round onto the endpoint, so an inverse square root
    // there loses O(sqrt(eps)); the estimate has to say so.
    let r = integrate_interval(|x: f64| 1.0 / (1.0 - x * x).sqrt(), -1.0, 1.0, &spec).unwrap();
    assert!((r.value - PI).abs() <= r.err_est);
    assert_relative_eq!(r.value, PI, max_relative = 1e-7);
    // at x = 0 the nodes stay exact
    let r = integrate_interval(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &spec).unwrap();
    assert_relative_eq!(r.value, 2.0, max_relative = 1e-13);
    assert!(r.err_est < 1e-10);
}

#[test]
fn gauss_legendre_integrates_polynomials() {
    let (x, w) = gauss_legendre(6);
    // exact through degree 11
    let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
    assert_relative_eq!(s, 2.0 / 11.0, max_relative = 1e-14);
}

#[test]
fn contour_inverts_gamma_mellin() {
    // (1 / 2 pi i) int Gamma(s) x^{-s} ds = e^{-x}
    let g = |s: Complex64| besselidx::specfun::gamma(s).unwrap();
    for gamma in [0.3, 1.0, 2.5] {
        for x in [0.5, 1.0, 3.0] {
            let r = integrate_contour(
                g,
                &ContourSpec::with_gamma(gamma),
                x,
                &QuadratureSpec::default(),
            )
            .unwrap();
            assert_relative_eq!(r.value.re, (-x).exp(), max_relative = 1e-10);
            assert!(r.value.im.abs() < 1e-12);
        }
    }
}
