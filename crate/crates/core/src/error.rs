use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of the gamma function at z = {re} + {im}i")]
    PoleOfGamma { re: f64, im: f64 },

    #[error("route unavailable: {0}")]
    RouteUnavailable(String),

    #[error("no convergence after {levels} levels (last = {last:e}, previous = {previous:e})")]
    NoConvergence {
        levels: usize,
        last: f64,
        previous: f64,
    },

    #[error("contour height {height} too small: integrand magnitude {magnitude:e} at the ends")]
    TruncationInsufficient { height: f64, magnitude: f64 },

    #[error("truncation infeasible: {0}")]
    TruncationInfeasible(String),

    #[error("integral diverges: {0}")]
    Divergence(String),

    #[error("non-finite integrand value at {at}")]
    NonFinite { at: f64 },

    #[error("tail contribution {tail:e} dominates the integral {value:e}")]
    TailDominance { tail: f64, value: f64 },

    #[error("golden file: {0}")]
    Golden(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
