//! Class integrals, the path constant `c_t` and the phase angle.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::algebra::{HermitianForm, Metric, PathParams, PhaseParameter, C64};
use crate::error::{Error, Result};

/// Relative tolerance on the class identity for exactly integrated
/// (constant) backgrounds.
pub const CONSTANT_ADMISSIBILITY_TOL: f64 = 1e-8;

/// `(∫Ω³, ∫3ω²Ω, ∫ω³)` for a fixed class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassIntegrals {
    pub int_omega_cap_cubed: f64,
    pub int_3omega2_omega_cap: f64,
    pub int_omega_cubed: f64,
}

impl ClassIntegrals {
    pub fn new(int_omega_cap_cubed: f64, int_3omega2_omega_cap: f64, int_omega_cubed: f64) -> Self {
        Self {
            int_omega_cap_cubed,
            int_3omega2_omega_cap,
            int_omega_cubed,
        }
    }

    /// Relative defect of `∫Ω³ = sec²θ̂ ∫3ω²Ω + 2 tan θ̂ sec²θ̂ ∫ω³`.
    pub fn class_identity_defect(&self, phase: &PhaseParameter) -> f64 {
        let sec2 = phase.sec2();
        let a = self.int_omega_cap_cubed;
        let b = sec2 * self.int_3omega2_omega_cap;
        let c = 2.0 * phase.tan() * sec2 * self.int_omega_cubed;
        let scale = a.abs().max(b.abs()).max(c.abs());
        if scale == 0.0 {
            return 0.0;
        }
        (a - b - c).abs() / scale
    }

    pub fn check_admissible(&self, phase: &PhaseParameter, rel_tol: f64) -> Result<()> {
        if !(self.int_omega_cubed > 0.0) {
            return Err(Error::InadmissibleClass(format!(
                "volume integral {} is not positive",
                self.int_omega_cubed
            )));
        }
        let defect = self.class_identity_defect(phase);
        if !(defect <= rel_tol) {
            return Err(Error::InadmissibleClass(format!(
                "class identity defect {defect:e} exceeds {rel_tol:e} at theta_hat = {}",
                phase.theta_hat()
            )));
        }
        Ok(())
    }

    /// Raw `c_t = (∫Ω³ − 2t tan θ̂ sec²θ̂ ∫ω³) / (sec²θ̂ ∫3ω²Ω)`, no checks.
    pub fn ct(&self, t: f64, phase: &PhaseParameter) -> f64 {
        let sec2 = phase.sec2();
        (self.int_omega_cap_cubed - 2.0 * t * phase.tan() * sec2 * self.int_omega_cubed)
            / (sec2 * self.int_3omega2_omega_cap)
    }

    /// `α = ∫Ω³ / (sec²θ̂ ∫3ω²Ω)`, so that `c_t = (1 − t)α + t` on an
    /// admissible class.
    pub fn alpha(&self, phase: &PhaseParameter) -> f64 {
        self.ct(0.0, phase)
    }
}

/// A point on the continuity path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub t: f64,
    pub c_t: f64,
    pub phase: PhaseParameter,
}

impl PathPoint {
    pub fn params(&self) -> PathParams {
        PathParams::new(self.c_t, self.t, self.phase)
    }
}

/// Checks the bounds `1/3 < c_t ≤ 1` and `c_t³ > t² sin²θ̂`. The upper bound
/// is only asserted for `tan θ̂ < 0`; for `tan θ̂ ≥ 0` the same path has
/// `c_t ≥ 1`.
fn check_ct_bounds(t: f64, c: f64, phase: &PhaseParameter, tol: f64) -> Result<()> {
    if !(c > 1.0 / 3.0) {
        return Err(Error::InadmissibleClass(format!(
            "c_t = {c} <= 1/3 at t = {t}"
        )));
    }
    if phase.tan() < 0.0 && !(c <= 1.0 + tol) {
        return Err(Error::InadmissibleClass(format!(
            "c_t = {c} > 1 at t = {t}"
        )));
    }
    if !(c.powi(3) > t * t * phase.sin2()) {
        return Err(Error::InadmissibleClass(format!(
            "c_t^3 = {} <= t^2 sin^2 = {} at t = {t}",
            c.powi(3),
            t * t * phase.sin2()
        )));
    }
    Ok(())
}

pub fn compute_ct(integrals: &ClassIntegrals, t: f64, phase: &PhaseParameter) -> Result<PathPoint> {
    compute_ct_with_tolerance(integrals, t, phase, CONSTANT_ADMISSIBILITY_TOL)
}

pub fn compute_ct_with_tolerance(
    integrals: &ClassIntegrals,
    t: f64,
    phase: &PhaseParameter,
    rel_tol: f64,
) -> Result<PathPoint> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} is outside [0, 1]")));
    }
    integrals.check_admissible(phase, rel_tol)?;
    let c_t = integrals.ct(t, phase);
    check_ct_bounds(t, c_t, phase, rel_tol)?;
    Ok(PathPoint {
        t,
        c_t,
        phase: *phase,
    })
}

/// θ̂ from the class integral `Z = ∫(ω + √−1 α)³ / ω³-normalised`, lifted into
/// (π/2, 3π/2).
pub fn compute_theta_hat(z: C64) -> Result<PhaseParameter> {
    if z.norm() == 0.0 || !z.is_finite() {
        return Err(Error::UnsupportedPhase { arg: f64::NAN });
    }
    let arg = z.arg();
    let theta = if arg > FRAC_PI_2 {
        arg
    } else if arg < -FRAC_PI_2 {
        arg + 2.0 * PI
    } else {
        return Err(Error::UnsupportedPhase { arg });
    };
    PhaseParameter::new(theta)
}

/// Resolve θ̂ from the curvature integral, checking it against a supplied
/// value when there is one.
pub fn resolve_theta_hat(z: C64, given: Option<&PhaseParameter>) -> Result<PhaseParameter> {
    let derived = compute_theta_hat(z)?;
    match given {
        None => Ok(derived),
        Some(g) if (g.theta_hat() - derived.theta_hat()).abs() <= 1e-10 => Ok(*g),
        Some(g) => Err(Error::InadmissibleClass(format!(
            "given theta_hat {} disagrees with the class value {}",
            g.theta_hat(),
            derived.theta_hat()
        ))),
    }
}

/// Exact class integrals of constant forms: `(σ₃V, σ₁V, V)` with `σ_k` the
/// elementary symmetric polynomials of the relative spectrum and `V = ∫ω³`.
pub fn constant_class_integrals(
    omega: &HermitianForm,
    big_omega: &HermitianForm,
    volume: f64,
) -> Result<ClassIntegrals> {
    if !(volume > 0.0) {
        return Err(Error::Domain(format!("volume {volume} must be positive")));
    }
    let lambda = Metric::new(*omega)?.relative_spectrum(big_omega);
    Ok(ClassIntegrals::new(
        lambda.det() * volume,
        lambda.sum() * volume,
        volume,
    ))
}
