pub mod error;
pub mod golden;
mod guard;
pub mod kernel;
pub mod quadrature;
pub mod specfun;
pub mod transforms;
pub mod verification;
pub mod wedge_pde;

pub use error::{Error, Result};
pub use kernel::Route;
pub use quadrature::{ContourSpec, Decay, QuadratureSpec};
pub use transforms::{LebesgueParams, SampledFunction};
pub use verification::{CheckRecord, VerifyReport};
pub use wedge_pde::{PolarPoint, WedgeParams};

/// A computed value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T> {
    pub value: T,
    pub err_est: f64,
}
