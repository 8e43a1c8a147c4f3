use approx::assert_relative_eq;
use besselidx::kernel::{
    check_bound_delta, index_integral_check, ode_residual, psi, psi_direct, psi_fourier,
    psi_mellin_barnes, TAU_MIN,
};
use besselidx::{ContourSpec, Error, Route};

// (tau, x, Psi_tau(x)) from the Bessel product in 30-digit arithmetic
const PSI: [(f64, f64, f64); 3] = [
    (0.3, 0.2, 0.069649095658924093978),
    (3.0, 2.5, 0.00037788134671288848403),
    (7.0, 0.05, -3.0181305764929439494e-7),
];

#[test]
fn psi_reference_values_every_route() {
    let contour = ContourSpec::default();
    for (tau, x, want) in PSI {
        let tol = 1e-10 * want.abs().max(1e-6);
        for (name, got) in [
            ("direct", psi_direct(tau, x).unwrap().value),
            ("fourier", psi_fourier(tau, x).unwrap().value),
            (
                "mellin-barnes",
                psi_mellin_barnes(tau, x, &contour).unwrap().value,
            ),
        ] {
            assert!((got - want).abs() <= tol, "{name} tau={tau} x={x}: {got}");
        }
    }
}

#[test]
fn mellin_barnes_is_independent_of_the_contour() {
    for (tau, x, want) in PSI {
        for gamma in [0.1, 0.25, 0.8, 1.5] {
            let got = psi_mellin_barnes(tau, x, &ContourSpec::with_gamma(gamma))
                .unwrap()
                .value;
            assert!(
                (got - want).abs() <= 1e-9 * want.abs().max(1e-6),
                "gamma={gamma} tau={tau} x={x}: {got}"
            );
        }
    }
}

#[test]
fn route_dispatch_and_evenness() {
    for route in [Route::Direct, Route::Fourier] {
        let a = psi(1.7, 0.9, route).unwrap().value;
        let b = psi(-1.7, 0.9, route).unwrap().value;
        assert_eq!(a, b);
    }
}

#[test]
fn direct_route_refuses_small_tau() {
    assert!(matches!(
        psi_direct(0.5 * TAU_MIN, 1.0),
        Err(Error::RouteUnavailable(_))
    ));
    let near = psi_direct(TAU_MIN, 1.0).unwrap().value;
    let zero = psi_fourier(0.0, 1.0).unwrap().value;
    assert_relative_eq!(near, zero, max_relative = 1e-5);
}

#[test]
fn invalid_inputs() {
    assert!(matches!(psi_direct(1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(psi_fourier(f64::NAN, 1.0), Err(Error::Domain(_))));
    assert!(psi_mellin_barnes(1.0, 1.0, &ContourSpec::with_gamma(-0.5)).is_err());
}

#[test]
fn large_x_underflows_to_zero() {
    assert_eq!(psi_direct(2.0, 1e300).unwrap().value, 0.0);
}

#[test]
fn ode_and_identity_off_grid() {
    let r = ode_residual(1.5, 0.6, &ContourSpec::default()).unwrap();
    assert!(r.normalized <= 1e-8, "{r:?}");
    let c = index_integral_check(1.5, 0.25).unwrap();
    assert!(
        (c.lhs.value - c.rhs.value).abs() <= 1e-6 * c.rhs.value.abs().max(1.0),
        "{c:?}"
    );
}

#[test]
fn delta_bounds_hold() {
    for delta in [0.0, 0.7, 1.2] {
        for (tau, x) in [(0.2, 0.05), (3.0, 1.0), (9.0, 40.0)] {
            let b = check_bound_delta(tau, x, delta).unwrap();
            assert!(b.satisfied, "delta={delta} tau={tau} x={x}: {b:?}");
        }
    }
}
