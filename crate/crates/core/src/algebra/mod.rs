//! Pointwise algebra: relative spectra, the phase function, the operator
//! `F = (c tr A + 2t tan θ̂) / det A`, cone conditions, subsolution checks and
//! the convexity quantities used by the a priori estimates.
//!
//! Everything here acts on a single point of the manifold and is a pure
//! function of its inputs.

mod cone;
mod form;
mod operator;
mod spectrum;
mod subsolution;

pub use cone::{cone_check, pair_sum_lower_bound, ConeMargins};
pub use form::{HermitianForm, C64};
pub use operator::{
    constraint_project, convexity_quantities, convexity_rhs, euler_bound_slack, f_tilde, f_value,
    gma_residual, gradient_f, hessian_quadratic_form, linearized_diagonal, solve_lambda3,
    ConvexityQuantities,
};
pub use spectrum::{dhym_residual, phase, relative_spectrum, Metric, RelativeSpectrum};
pub use subsolution::{
    subsolution_check_n3, subsolution_coefficients, subsolution_margins, SubsolutionMargins,
    SummationRange,
};

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The phase angle θ̂ together with the trigonometric values every formula
/// needs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseParameter {
    theta_hat: f64,
    tan_theta: f64,
    sec2_theta: f64,
    sin2_theta: f64,
}

impl PhaseParameter {
    /// Minimum distance kept from π/2 and 3π/2, where sec² blows up.
    pub const DEFAULT_MARGIN: f64 = 1e-6;

    pub fn new(theta_hat: f64) -> Result<Self> {
        Self::with_margin(theta_hat, Self::DEFAULT_MARGIN)
    }

    pub fn with_margin(theta_hat: f64, margin: f64) -> Result<Self> {
        let (lo, hi) = (FRAC_PI_2 + margin, 3.0 * FRAC_PI_2 - margin);
        if !(theta_hat > lo && theta_hat < hi) {
            return Err(Error::InvalidPhase { theta_hat, lo, hi });
        }
        Ok(Self::from_parts(theta_hat, theta_hat.tan()))
    }

    /// Build from tan θ̂ directly; θ̂ = π + arctan(tan θ̂) is the unique angle
    /// in (π/2, 3π/2) with that tangent. Exact whenever `tan_theta` is.
    pub fn from_tan(tan_theta: f64) -> Result<Self> {
        if !tan_theta.is_finite() {
            return Err(Error::InvalidPhase {
                theta_hat: f64::NAN,
                lo: FRAC_PI_2,
                hi: 3.0 * FRAC_PI_2,
            });
        }
        Ok(Self::from_parts(PI + tan_theta.atan(), tan_theta))
    }

    fn from_parts(theta_hat: f64, tan_theta: f64) -> Self {
        let sec2_theta = 1.0 + tan_theta * tan_theta;
        Self {
            theta_hat,
            tan_theta,
            sec2_theta,
            sin2_theta: tan_theta * tan_theta / sec2_theta,
        }
    }

    pub fn theta_hat(&self) -> f64 {
        self.theta_hat
    }

    pub fn tan(&self) -> f64 {
        self.tan_theta
    }

    pub fn sec2(&self) -> f64 {
        self.sec2_theta
    }

    pub fn cos2(&self) -> f64 {
        1.0 / self.sec2_theta
    }

    pub fn sin2(&self) -> f64 {
        self.sin2_theta
    }

    /// |sec θ̂|.
    pub fn abs_sec(&self) -> f64 {
        self.sec2_theta.sqrt()
    }
}

/// The constants `(c, t, θ̂)` entering the path equation at one value of t.
///
/// Unlike [`crate::path::PathPoint`] this carries no invariants, so the
/// algebra can be probed anywhere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathParams {
    pub c: f64,
    pub t: f64,
    pub phase: PhaseParameter,
}

impl PathParams {
    pub fn new(c: f64, t: f64, phase: PhaseParameter) -> Self {
        Self { c, t, phase }
    }

    /// `c Σλ + 2t tan θ̂`, the numerator of `F`.
    pub fn shifted_trace(&self, lambda: &RelativeSpectrum) -> f64 {
        self.c * lambda.sum() + 2.0 * self.t * self.phase.tan()
    }

    /// `c sec² θ̂`.
    pub fn c_sec2(&self) -> f64 {
        self.c * self.phase.sec2()
    }
}
