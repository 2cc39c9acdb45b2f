use nalgebra::Matrix3;

use crate::algebra::{
    cone_check, f_tilde, gma_residual, ConeMargins, HermitianForm, PathParams, RelativeSpectrum,
    C64,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::torus::{BackgroundData, FormField, ScalarField};

/// Pointwise quantities of `Ω_φ = Ω₀ + √−1∂∂̄φ` at one path point.
#[derive(Clone, Debug)]
pub struct PathState {
    pub params: PathParams,
    pub omega_phi: FormField,
    pub spectra: Vec<RelativeSpectrum>,
    /// Wedge-form residual `λ₁λ₂λ₃ − c sec²θ̂ Σλ − 2t tan θ̂ sec²θ̂`.
    pub gma: Vec<f64>,
    /// `sup |F̃ − 1|`.
    pub residual_sup: f64,
    pub margins: ConeMargins,
    pub worst_margin_point: usize,
    pub sup_lambda1: f64,
}

impl PathState {
    pub fn gma_l2(&self) -> f64 {
        (self.gma.iter().map(|g| g * g).sum::<f64>() / self.gma.len() as f64).sqrt()
    }
}

pub fn evaluate(bg: &BackgroundData, phi: &ScalarField, params: &PathParams) -> PathState {
    let omega_phi = bg.omega0().add(&bg.spectral().complex_hessian(phi));
    let metric = bg.metric();
    let point = exec::map_slice(omega_phi.values(), |f| {
        let lambda = metric.relative_spectrum(f);
        let g = gma_residual(&lambda, params);
        let r = f_tilde(&lambda, params).map_or(f64::INFINITY, |v| (v - 1.0).abs());
        (lambda, g, r, cone_check(&lambda, params))
    });

    let mut margins = ConeMargins::infinite();
    let mut worst_margin_point = 0;
    let mut worst = f64::INFINITY;
    let mut residual_sup: f64 = 0.0;
    let mut sup_lambda1 = f64::NEG_INFINITY;
    for (i, (lambda, _, r, m)) in point.iter().enumerate() {
        margins = margins.min(m);
        let w = m
            .min_lambda
            .min(m.min_pair_product_margin)
            .min(m.min_pair_sum_margin);
        if w < worst {
            worst = w;
            worst_margin_point = i;
        }
        residual_sup = if r.is_nan() {
            f64::INFINITY
        } else {
            residual_sup.max(*r)
        };
        sup_lambda1 = sup_lambda1.max(lambda.get(0));
    }
    let (spectra, gma) = point.iter().map(|(l, g, _, _)| (*l, *g)).unzip();
    PathState {
        params: *params,
        omega_phi,
        spectra,
        gma,
        residual_sup,
        margins,
        worst_margin_point,
        sup_lambda1,
    }
}

fn adjugate(m: &Matrix3<C64>) -> Matrix3<C64> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
    };
    // adj(M)_{ij} = cofactor_{ji}
    Matrix3::new(
        c(1, 2, 1, 2),
        -c(0, 2, 1, 2),
        c(0, 1, 1, 2),
        -c(1, 2, 0, 2),
        c(0, 2, 0, 2),
        -c(0, 1, 0, 2),
        c(1, 2, 0, 1),
        -c(0, 2, 0, 1),
        c(0, 1, 0, 1),
    )
}

/// Coefficients `N = adj(Ω_φ)/det ω − c sec²θ̂ ω⁻¹` of the linearised wedge
/// operator `u ↦ tr(N · ∂∂̄u)`. In a frame diagonalising `(ω, Ω_φ)` the weight
/// on `u_{μμ̄}` is `λ_νλ_ρ − c sec²θ̂`.
pub fn coefficient_field(bg: &BackgroundData, state: &PathState) -> FormField {
    let metric = bg.metric();
    let inv_det = 1.0 / metric.det();
    let shift = *metric.inverse() * state.params.c_sec2();
    let values = exec::map_slice(state.omega_phi.values(), |f| {
        HermitianForm::hermitian_part(adjugate(f.matrix())) * inv_det - shift
    });
    FormField::new(*state.omega_phi.grid(), values).expect("same grid")
}

/// Linearisation coefficients at `(φ, t)`; fails if any coefficient is
/// nonpositive (ellipticity lost).
pub fn linearized_coefficients(
    bg: &BackgroundData,
    phi: &ScalarField,
    params: &PathParams,
) -> Result<FormField> {
    let state = evaluate(bg, phi, params);
    check_elliptic(&state)?;
    Ok(coefficient_field(bg, &state))
}

pub(crate) fn check_elliptic(state: &PathState) -> Result<()> {
    let m = &state.margins;
    if !(m.min_lambda > 0.0 && m.min_pair_product_margin > 0.0) {
        let i = state.worst_margin_point;
        return Err(Error::EllipticityLost {
            t: state.params.t,
            point: i,
            margins: cone_check(&state.spectra[i], &state.params),
        });
    }
    Ok(())
}
