//! Special functions against frozen high-precision reference values and
//! classical identities.

use approx::assert_relative_eq;
use besselidx::specfun::{
    bessel_j_imag_order, beta, gamma, log_gamma, macdonald_complex_arg, macdonald_imag_order,
};
use num_complex::Complex64;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// (tau, z, K_{i tau}(z), Re J_{i tau}(z), Im J_{i tau}(z)), 30-digit arithmetic
const BESSEL: [(f64, f64, f64, f64, f64); 4] = [
    (
        0.5,
        1.0,
        0.38404301690509269863,
        0.9866705664650292805,
        0.0097779709422508797249,
    ),
    (
        2.0,
        3.0,
        0.019156728326977342962,
        0.092147806138901813828,
        4.8585083211809692871,
    ),
    (
        5.0,
        0.5,
        -0.00042411714808406798747,
        -117.96231656918448439,
        443.05125661697256912,
    ),
    (
        10.0,
        12.0,
        3.1716266281195761941e-8,
        381727.78082367951608,
        550505.57765206384287,
    ),
];

#[test]
fn bessel_reference_values() {
    for (tau, z, k, jr, ji) in BESSEL {
        let kv = macdonald_imag_order(tau, z).unwrap();
        assert_relative_eq!(kv.value, k, max_relative = 1e-12);
        let j = bessel_j_imag_order(tau, z).unwrap().value;
        let scale = jr.hypot(ji);
        assert!((j.re - jr).abs() <= 1e-12 * scale, "Re J tau={tau} z={z}");
        assert!((j.im - ji).abs() <= 1e-12 * scale, "Im J tau={tau} z={z}");
    }
}

#[test]
fn log_gamma_reference_values() {
    let cases = [
        (
            c(-2.5, 0.3),
            c(-0.43208889261320192052, -9.0933454212897415073),
        ),
        (
            c(0.1, -7.0),
            c(-10.854877044420902517, -5.9875701533014403073),
        ),
        (c(0.5, 0.0), c(0.5 * PI.ln(), 0.0)),
    ];
    for (z, want) in cases {
        let got = log_gamma(z).unwrap();
        assert!(
            (got - want).norm() <= 1e-12 * want.norm().max(1.0),
            "{z}: {got}"
        );
    }
}

#[test]
fn gamma_reflection_and_recurrence() {
    for z in [c(0.3, 0.0), c(0.25, 1.5), c(-1.7, 0.4), c(0.5, -3.0)] {
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = PI / (z * PI).sin();
        assert!(
            (lhs - rhs).norm() <= 1e-12 * rhs.norm(),
            "reflection at {z}"
        );
        let up = gamma(z + 1.0).unwrap();
        let want = z * gamma(z).unwrap();
        assert!(
            (up - want).norm() <= 1e-12 * want.norm(),
            "recurrence at {z}"
        );
    }
}

#[test]
fn gamma_poles_are_errors() {
    for n in [0.0, -1.0, -4.0] {
        assert!(log_gamma(c(n, 0.0)).is_err());
    }
}

#[test]
fn beta_values() {
    assert_relative_eq!(beta(2.0, 3.0).unwrap(), 1.0 / 12.0, max_relative = 1e-14);
    assert_relative_eq!(beta(0.5, 0.5).unwrap(), PI, max_relative = 1e-14);
}

#[test]
fn macdonald_recurrence() {
    // K_{nu+1}(w) - K_{nu-1}(w) = (2 nu / w) K_nu(w)
    for (nu, w) in [(0.5, c(1.0, 0.5)), (1.3, c(2.0, -1.0)), (2.0, c(0.7, 0.7))] {
        let up = macdonald_complex_arg(nu + 1.0, w).unwrap().value;
        // K is even in the order
        let down = macdonald_complex_arg((nu - 1.0).abs(), w).unwrap().value;
        let mid = macdonald_complex_arg(nu, w).unwrap().value;
        let rhs = mid * (2.0 * nu) / w;
        assert!(
            ((up - down) - rhs).norm() <= 1e-11 * up.norm(),
            "nu={nu} w={w}"
        );
    }
}

#[test]
fn macdonald_half_order_closed_form() {
    // K_{1/2}(w) = sqrt(pi / (2 w)) e^{-w}
    for w in [c(0.5, 0.0), c(3.0, 2.0), c(1.0, -4.0)] {
        let got = macdonald_complex_arg(0.5, w).unwrap().value;
        let want = (PI / (2.0 * w)).sqrt() * (-w).exp();
        assert!((got - want).norm() <= 1e-12 * want.norm(), "{w}");
    }
}

#[test]
fn envelopes_are_enforced() {
    assert!(bessel_j_imag_order(60.0, 1.0).is_err());
    assert!(bessel_j_imag_order(1.0, 150.0).is_err());
    assert!(macdonald_imag_order(1.0, -1.0).is_err());
    // far past underflow
    assert_eq!(macdonald_imag_order(1.0, 1e4).unwrap().value, 0.0);
}
