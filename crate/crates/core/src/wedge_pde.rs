//! u(r, theta) = int Psi_tau(r) e^{theta tau} g(tau) dtau on a wedge, a
//! solution of d^2/dr^2 [(r d/dr)^2 u + d^2u/dtheta^2] + 16 u = 0 with
//! u(r, 0) = (Gg)(r).

use serde::Serialize;
use std::f64::consts::TAU as TWO_PI;

use crate::error::{Error, Result};
use crate::quadrature::Decay;
use crate::transforms::{
    adjoint_g, adjoint_g_fourier_route, weighted_tau_integral, AdjointProfile, SampledFunction,
};
use crate::EvalResult;

/// Wedge opening and boundary data.
#[derive(Debug, Clone)]
pub struct WedgeParams {
    pub beta: f64,
    pub g: SampledFunction,
}

impl WedgeParams {
    /// Needs 0 < beta < 2 pi and int |g| e^{beta |tau|} finite according to
    /// the decay metadata of g. Evaluation is further limited to
    /// theta <= pi/2 - [`crate::transforms::THETA_MARGIN`].
    pub fn new(beta: f64, g: SampledFunction) -> Result<Self> {
        if !(beta > 0.0 && beta < TWO_PI) {
            return Err(Error::Domain(format!(
                "wedge opening must lie in (0, 2 pi) (got {beta})"
            )));
        }
        let ok = match g.decay {
            Decay::Gaussian { rate } => rate > 0.0,
            Decay::Exponential { rate } => rate > beta,
            Decay::SqrtExponential { .. } | Decay::Power { .. } => false,
        };
        if !ok {
            return Err(Error::Domain(format!(
                "g e^(beta |tau|) is not integrable for beta = {beta} and decay {:?}",
                g.decay
            )));
        }
        Ok(Self { beta, g })
    }
}

/// Point of the wedge in polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub fn new(r: f64, theta: f64, params: &WedgeParams) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("r must be positive (got {r})")));
        }
        if !(theta >= 0.0 && theta < params.beta) {
            return Err(Error::Domain(format!(
                "theta must lie in [0, {}) (got {theta})",
                params.beta
            )));
        }
        Ok(Self { r, theta })
    }
}

/// u(r, theta). At theta = 0 this runs exactly the quadrature of
/// [`adjoint_g`], so the two agree bitwise.
pub fn wedge_u(params: &WedgeParams, pt: PolarPoint) -> Result<EvalResult<f64>> {
    weighted_tau_integral(&params.g, pt.r, pt.theta)
}

/// How [`pde_residual_with`] obtains derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualMode {
    /// r-derivatives from the Mellin-Barnes form, theta-derivatives exact.
    SemiAnalytic,
    /// Central differences of [`wedge_u`] on a 5 x 5 stencil, Richardson
    /// extrapolated from h and h/2.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeResidual {
    /// r^2 u_rrrr, 5 r u_rrr, 4 u_rr, u_rrthth, 16 u
    pub terms: [f64; 5],
    pub residual: f64,
    /// |residual| / max |term|
    pub normalized: f64,
}

impl PdeResidual {
    fn from_terms(terms: [f64; 5]) -> Self {
        let residual: f64 = terms.iter().sum();
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        Self {
            terms,
            residual,
            normalized: if scale > 0.0 {
                residual.abs() / scale
            } else {
                0.0
            },
        }
    }
}

/// Mellin-side tables of u and u_thth at one theta, reusable across r.
#[derive(Debug, Clone)]
pub struct ThetaProfiles {
    pub theta: f64,
    plain: AdjointProfile,
    squared: AdjointProfile,
}

impl ThetaProfiles {
    pub fn new(params: &WedgeParams, theta: f64) -> Result<Self> {
        Ok(Self {
            theta,
            plain: AdjointProfile::for_weighted(&params.g, theta, false)?,
            squared: AdjointProfile::for_weighted(&params.g, theta, true)?,
        })
    }

    /// Semi-analytic residual at radius r.
    pub fn residual(&self, r: f64) -> Result<PdeResidual> {
        let d = |n| self.plain.eval(r, n).map(|v| v.value);
        let u_rrthth = self.squared.eval(r, 2)?.value;
        Ok(PdeResidual::from_terms([
            r * r * d(4)?,
            5.0 * r * d(3)?,
            4.0 * d(2)?,
            u_rrthth,
            16.0 * d(0)?,
        ]))
    }
}

/// Residual with the default semi-analytic mode. `h` only matters for the
/// stencil check, which both modes share.
pub fn pde_residual(params: &WedgeParams, pt: PolarPoint, h: f64) -> Result<PdeResidual> {
    pde_residual_with(params, pt, h, ResidualMode::SemiAnalytic)
}

fn check_stencil(params: &WedgeParams, pt: PolarPoint, h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!(
            "stencil spacing must be positive (got {h})"
        )));
    }
    if pt.r - 2.0 * h <= 0.0 || pt.theta - 2.0 * h < 0.0 || pt.theta + 2.0 * h >= params.beta {
        return Err(Error::Domain(format!(
            "stencil of spacing {h} around (r, theta) = ({}, {}) leaves the wedge",
            pt.r, pt.theta
        )));
    }
    Ok(())
}

pub fn pde_residual_with(
    params: &WedgeParams,
    pt: PolarPoint,
    h: f64,
    mode: ResidualMode,
) -> Result<PdeResidual> {
    check_stencil(params, pt, h)?;
    match mode {
        ResidualMode::SemiAnalytic => ThetaProfiles::new(params, pt.theta)?.residual(pt.r),
        ResidualMode::FiniteDifference => {
            let coarse = fd_terms(params, pt, h)?;
            let fine = fd_terms(params, pt, 0.5 * h)?;
            let mut terms = [0.0; 5];
            for i in 0..5 {
                terms[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
            }
            Ok(PdeResidual::from_terms(terms))
        }
    }
}

fn fd_terms(params: &WedgeParams, pt: PolarPoint, h: f64) -> Result<[f64; 5]> {
    let u = |i: i32, j: i32| {
        wedge_u(
            params,
            PolarPoint {
                r: pt.r + i as f64 * h,
                theta: pt.theta + j as f64 * h,
            },
        )
        .map(|v| v.value)
    };
    let mut col = [[0.0; 3]; 5];
    for (a, i) in (-2i32..=2).enumerate() {
        for (b, j) in (-1..=1).enumerate() {
            // the theta = +-1 columns only need the inner three radii
            if j != 0 && i.abs() == 2 {
                continue;
            }
            col[a][b] = u(i, j)?;
        }
    }
    let c = |i: usize| col[i][1];
    let (h2, h3, h4) = (h * h, h * h * h, h * h * h * h);
    let u_rr_at = |b: usize| (col[3][b] - 2.0 * col[2][b] + col[1][b]) / h2;
    let u_rrrr = (c(4) - 4.0 * c(3) + 6.0 * c(2) - 4.0 * c(1) + c(0)) / h4;
    let u_rrr = (c(4) - 2.0 * c(3) + 2.0 * c(1) - c(0)) / (2.0 * h3);
    let u_rr = u_rr_at(1);
    let u_rrthth = (u_rr_at(2) - 2.0 * u_rr_at(1) + u_rr_at(0)) / h2;
    let r = pt.r;
    Ok([
        r * r * u_rrrr,
        5.0 * r * u_rrr,
        4.0 * u_rr,
        u_rrthth,
        16.0 * c(2),
    ])
}

/// Reference for u(r, 0) in [`initial_condition_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialConditionMode {
    /// Against [`adjoint_g`], which shares the quadrature path.
    SamePath,
    /// Against the Fourier-side representation of the adjoint transform.
    Independent,
}

/// max over the nodes of |u(r, 0) - (Gg)(r)|.
pub fn initial_condition_check(
    params: &WedgeParams,
    r_nodes: &[f64],
    mode: InitialConditionMode,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &r in r_nodes {
        let u = wedge_u(params, PolarPoint::new(r, 0.0, params)?)?.value;
        let reference = match mode {
            InitialConditionMode::SamePath => adjoint_g(&params.g, r)?.value,
            InitialConditionMode::Independent => adjoint_g_fourier_route(&params.g, r)?.value,
        };
        worst = worst.max((u - reference).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayCheck {
    pub near: f64,
    pub far: f64,
    pub satisfied: bool,
}

/// |u(r_far, theta)| <= ratio |u(r_near, theta)|.
pub fn decay_check(
    params: &WedgeParams,
    theta: f64,
    r_near: f64,
    r_far: f64,
    ratio: f64,
) -> Result<DecayCheck> {
    let near = wedge_u(params, PolarPoint::new(r_near, theta, params)?)?.value;
    let far = wedge_u(params, PolarPoint::new(r_far, theta, params)?)?.value;
    Ok(DecayCheck {
        near,
        far,
        satisfied: far.abs() <= ratio * near.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::canonical_g;

    fn params() -> WedgeParams {
        WedgeParams::new(1.4, canonical_g()).unwrap()
    }

    #[test]
    fn theta_zero_is_adjoint_bitwise() {
        let p = params();
        let u = wedge_u(&p, PolarPoint::new(1.0, 0.0, &p).unwrap()).unwrap();
        let g = adjoint_g(&p.g, 1.0).unwrap();
        assert_eq!(u.value.to_bits(), g.value.to_bits());
    }

    #[test]
    fn reference_value() {
        let p = params();
        let u = wedge_u(&p, PolarPoint::new(1.0, 0.5, &p).unwrap()).unwrap();
        assert!(
            (u.value - 0.015_513_225_991_909_458).abs() < 1e-11,
            "{}",
            u.value
        );
    }

    #[test]
    fn semi_analytic_residual() {
        let p = params();
        let r = pde_residual(&p, PolarPoint::new(1.0, 0.3, &p).unwrap(), 1e-2).unwrap();
        assert!(r.normalized < 1e-8, "{r:?}");
    }

    #[test]
    fn zero_data_has_zero_residual() {
        let z = SampledFunction::new(|_| 0.0, 0.0, Decay::Gaussian { rate: 1.0 });
        let p = WedgeParams::new(1.4, z).unwrap();
        let pt = PolarPoint::new(1.0, 0.3, &p).unwrap();
        let r = pde_residual_with(&p, pt, 1e-2, ResidualMode::FiniteDifference).unwrap();
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.normalized, 0.0);
    }

    #[test]
    fn parameter_errors() {
        let g = canonical_g();
        assert!(WedgeParams::new(7.0, g.clone()).is_err());
        let slow = SampledFunction::new(
            |t: f64| (-t.abs()).exp(),
            0.0,
            Decay::Exponential { rate: 1.0 },
        );
        assert!(WedgeParams::new(1.4, slow).is_err());
        let p = params();
        assert!(PolarPoint::new(1.0, 1.5, &p).is_err());
        assert!(PolarPoint::new(-1.0, 0.5, &p).is_err());
        let pt = PolarPoint::new(0.015, 0.3, &p).unwrap();
        assert!(pde_residual(&p, pt, 1e-2).is_err());
        let steep = WedgeParams::new(1.6, canonical_g()).unwrap();
        let pt = PolarPoint::new(1.0, 1.55, &steep).unwrap();
        assert!(matches!(
            wedge_u(&steep, pt),
            Err(Error::TruncationInfeasible(_))
        ));
    }
}
