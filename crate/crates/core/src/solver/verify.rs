use serde::{Deserialize, Serialize};

use crate::algebra::{cone_check, ConeMargins, PathParams, PhaseParameter};
use crate::error::{Error, Result};
use crate::exec;
use crate::torus::{BackgroundData, ScalarField};

/// Independent check of a solution against the original phase equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `sup |F̃ − 1|` at `c = 1, t = 1`.
    pub residual_sup: f64,
    /// `sup |Im Z − tan θ̂ Re Z|` for `Z = Π(1 + √−1 a)`.
    pub dhym_residual_sup: f64,
    /// `sup |Θ_ω(curvature) − θ̂|`.
    pub phase_deviation_sup: f64,
    pub margins: ConeMargins,
}

pub fn verify_solution(
    bg: &BackgroundData,
    phi: &ScalarField,
    phase: &PhaseParameter,
) -> Result<VerificationReport> {
    if phi.grid() != bg.grid() {
        return Err(Error::InvalidGrid(
            "potential lives on a different grid".into(),
        ));
    }
    let params = PathParams::new(1.0, 1.0, *phase);
    let omega_phi = bg.omega0().add(&bg.spectral().complex_hessian(phi));
    let metric = bg.metric();
    let shift = *metric.form() * phase.tan();
    let per_point = exec::map_slice(omega_phi.values(), |f| {
        let lambda = metric.relative_spectrum(f);
        let curvature = metric.relative_spectrum(&(*f + shift));
        let residual =
            crate::algebra::f_tilde(&lambda, &params).map_or(f64::INFINITY, |v| (v - 1.0).abs());
        (
            residual,
            curvature.dhym_residual(phase).abs(),
            (curvature.lagrangian_phase() - phase.theta_hat()).abs(),
            cone_check(&lambda, &params),
        )
    });
    let mut report = VerificationReport {
        residual_sup: 0.0,
        dhym_residual_sup: 0.0,
        phase_deviation_sup: 0.0,
        margins: ConeMargins::infinite(),
    };
    for (r, d, p, m) in per_point {
        report.residual_sup = report.residual_sup.max(r);
        report.dhym_residual_sup = report.dhym_residual_sup.max(d);
        report.phase_deviation_sup = report.phase_deviation_sup.max(p);
        report.margins = report.margins.min(&m);
    }
    Ok(report)
}
