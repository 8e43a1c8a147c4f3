//! Special functions: complex log-gamma, beta, K_{i tau}, J_{i tau} and K_nu
//! of complex argument.

mod bessel;
mod gamma;

pub use bessel::{
    bessel_j_imag_order, macdonald_complex_arg, macdonald_imag_order, J_MAX_ARG, J_MAX_ORDER,
};
pub use gamma::{beta, gamma, log_gamma};
