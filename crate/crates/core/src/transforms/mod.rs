//! Forward, adjoint and inverse index transforms, norms and bounds.

mod adjoint;
mod forward;
mod function;
mod inversion;
mod norms;

pub(crate) use adjoint::weighted_tau_integral;
pub use adjoint::{
    adjoint_g, adjoint_g_derivative, adjoint_g_fourier_route, adjoint_g_fourier_route_with,
    AdjointProfile, THETA_MARGIN,
};
pub use forward::{
    forward_f, forward_f_composition, forward_f_mellin, fourier_cosine, fourier_transform,
    meijer_k0, mellin_numeric,
};
pub use function::{
    canonical_f, canonical_f_mellin, canonical_g, canonical_g_fourier, LebesgueParams,
    SampledFunction,
};
pub use inversion::{
    invert_f, invert_f_grid, invert_g, DerivativeMode, InversionOptions, InversionResult,
    INVERT_G_MAX,
};
pub use norms::{
    adjoint_norm_constant, adjoint_pointwise_constant, bound_report, embedding_constant,
    embedding_constant_full_beta, embedding_constant_p1, forward_lp_constant,
    hilbert_schmidt_diagnostic, norm_l0, norm_lp_line, norm_nu_p, BoundSelector,
    HilbertSchmidtDiagnostic, InequalityReport, SUP_GRID_POINTS,
};
