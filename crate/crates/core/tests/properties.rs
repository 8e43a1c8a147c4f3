use besselidx::kernel::{psi_direct, psi_fourier};
use besselidx::specfun::{gamma, log_gamma};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direct_and_fourier_agree(tau in 0.2f64..8.0, x in 0.05f64..8.0) {
        let a = psi_direct(tau, x).unwrap();
        let b = psi_fourier(tau, x).unwrap();
        let scale = a.value.abs().max(b.value.abs()).max(1e-300);
        let tol = (1e-8 * scale).max(a.err_est + b.err_est);
        prop_assert!((a.value - b.value).abs() <= tol, "tau={} x={} {} {}", tau, x, a.value, b.value);
    }

    #[test]
    fn psi_is_even(tau in 0.01f64..20.0, x in 0.01f64..20.0) {
        prop_assert_eq!(psi_direct(tau, x).unwrap().value, psi_direct(-tau, x).unwrap().value);
    }

    #[test]
    fn gamma_recurrence(re in -6.0f64..6.0, im in 0.1f64..20.0) {
        let z = Complex64::new(re, im);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }

    #[test]
    fn log_gamma_conjugate_symmetry(re in -6.0f64..6.0, im in 0.1f64..30.0) {
        let z = Complex64::new(re, im);
        let a = log_gamma(z).unwrap();
        let b = log_gamma(z.conj()).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-13 * a.norm().max(1.0));
    }
}
