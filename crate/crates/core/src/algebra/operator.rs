//! The path operator in eigenvalue form.
//!
//! With `A = ω⁻¹Ω_φ` diagonal, `F(A) = (c tr A + 2t tan θ̂) / det A` and the
//! path equation reads `sec²θ̂ · F(A) = 1`, equivalently
//! `λ₁λ₂λ₃ = c sec²θ̂ Σλ_i + 2t tan θ̂ sec²θ̂`.

use serde::{Deserialize, Serialize};

use super::{HermitianForm, PathParams, RelativeSpectrum, C64};
use crate::error::{Error, Result};

/// `λ₁λ₂λ₃ − c sec²θ̂ (λ₁+λ₂+λ₃) − 2t tan θ̂ sec²θ̂`.
pub fn gma_residual(lambda: &RelativeSpectrum, p: &PathParams) -> f64 {
    let sec2 = p.phase.sec2();
    lambda.det() - p.c * sec2 * lambda.sum() - 2.0 * p.t * p.phase.tan() * sec2
}

fn nonsingular_det(lambda: &RelativeSpectrum) -> Result<f64> {
    let det = lambda.det();
    if det == 0.0 || !det.is_finite() {
        return Err(Error::SingularDeterminant {
            lambda: lambda.values(),
        });
    }
    Ok(det)
}

/// `F = (c Σλ + 2t tan θ̂) / (λ₁λ₂λ₃)`.
pub fn f_value(lambda: &RelativeSpectrum, p: &PathParams) -> Result<f64> {
    Ok(p.shifted_trace(lambda) / nonsingular_det(lambda)?)
}

/// `F̃ = sec²θ̂ · F`; the path equation is `F̃ = 1`.
pub fn f_tilde(lambda: &RelativeSpectrum, p: &PathParams) -> Result<f64> {
    Ok(p.phase.sec2() * f_value(lambda, p)?)
}

/// `∂F/∂λ_μ = (c − (c Σλ + 2t tan θ̂)/λ_μ) / det`.
pub fn gradient_f(lambda: &RelativeSpectrum, p: &PathParams) -> Result<[f64; 3]> {
    let det = nonsingular_det(lambda)?;
    let k = p.shifted_trace(lambda);
    Ok(lambda.values().map(|l| (p.c - k / l) / det))
}

/// `min_μ (∂F/∂λ_μ · λ_μ) + cos²θ̂`. Nonnegative on the level set `F̃ = 1`
/// inside the cone.
pub fn euler_bound_slack(lambda: &RelativeSpectrum, p: &PathParams) -> Result<f64> {
    let grad = gradient_f(lambda, p)?;
    let min = grad
        .iter()
        .zip(lambda.values())
        .map(|(g, l)| g * l)
        .fold(f64::INFINITY, f64::min);
    Ok(min + p.phase.cos2())
}

/// The eigenvalue `λ₃` that puts `(λ₁, λ₂, λ₃)` on the level set `F̃ = 1`:
/// `λ₃ = sec²θ̂ (c(λ₁+λ₂) + 2t tan θ̂) / (λ₁λ₂ − c sec²θ̂)`.
pub fn solve_lambda3(lambda1: f64, lambda2: f64, p: &PathParams) -> Result<f64> {
    let denominator = lambda1 * lambda2 - p.c_sec2();
    if !(denominator > 0.0) {
        return Err(Error::OutsideCone { denominator });
    }
    let numerator = p.c * (lambda1 + lambda2) + 2.0 * p.t * p.phase.tan();
    Ok(p.phase.sec2() * numerator / denominator)
}

/// Diagonal coefficients of the linearised wedge operator in a frame
/// diagonalising `(ω, Ω_φ)`: the weight on `u_{μμ̄}` is `λ_νλ_ρ − c sec²θ̂`
/// for `{ν, ρ}` the complement of `μ`.
pub fn linearized_diagonal(lambda: &RelativeSpectrum, p: &PathParams) -> [f64; 3] {
    let [l1, l2, l3] = lambda.values();
    let cs = p.c_sec2();
    [l2 * l3 - cs, l1 * l3 - cs, l1 * l2 - cs]
}

/// The quantities `E, D, B` of the restricted-convexity computation and the
/// reduced discriminant `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityQuantities {
    pub e: f64,
    pub d: f64,
    pub b: f64,
    pub g: f64,
}

impl ConvexityQuantities {
    /// `ED − B²`.
    pub fn discriminant(&self) -> f64 {
        self.e * self.d - self.b * self.b
    }
}

/// `E, D, B` (λ₁ ≥ λ₂ ≥ λ₃) and
/// `g = c² Σ_{i<j} λ_iλ_j + 2ct tan θ̂ Σλ_i + 3t² tan²θ̂`, so that
/// `ED − B² = 4 (c Σλ + 2t tan θ̂)² g`.
pub fn convexity_quantities(lambda: &RelativeSpectrum, p: &PathParams) -> ConvexityQuantities {
    let [l1, l2, l3] = lambda.values();
    let (c, tt) = (p.c, p.t * p.phase.tan());
    let k = p.shifted_trace(lambda);
    ConvexityQuantities {
        e: 2.0 * (c * (l2 + l3) + 2.0 * tt) * k,
        d: 2.0 * (c * (l1 + l3) + 2.0 * tt) * k,
        b: 2.0 * (c * l3 + tt) * k,
        g: c * c * lambda.sigma2() + 2.0 * c * tt * lambda.sum() + 3.0 * tt * tt,
    }
}

/// `Σ ∂²F/∂A_{μν̄}∂A_{αβ̄} B_{μν̄} B_{αβ̄}` at `A = diag(λ)`:
///
/// `(1/det) Σ_{μ,α} [ −c v_α(λ_μ+λ_α)v_μ + K(|B_{μᾱ}|²/(λ_μλ_α) + v_μ v_α) ]`
///
/// with `v_μ = B_{μμ̄}/λ_μ` and `K = c Σλ + 2t tan θ̂`.
pub fn hessian_quadratic_form(
    lambda: &RelativeSpectrum,
    p: &PathParams,
    b: &HermitianForm,
) -> Result<f64> {
    let det = nonsingular_det(lambda)?;
    let l = lambda.values();
    let k = p.shifted_trace(lambda);
    let v: [f64; 3] = std::array::from_fn(|m| b.entry(m, m).re / l[m]);
    let mut acc = 0.0;
    for mu in 0..3 {
        for al in 0..3 {
            acc += -p.c * v[al] * (l[mu] + l[al]) * v[mu]
                + k * (b.entry(mu, al).norm_sqr() / (l[mu] * l[al]) + v[mu] * v[al]);
        }
    }
    Ok(acc / det)
}

/// Right-hand side of the restricted-convexity inequality:
/// `(K/det) Σ_{α≠μ} |B_{μᾱ}|² / (λ_μλ_α)`.
pub fn convexity_rhs(lambda: &RelativeSpectrum, p: &PathParams, b: &HermitianForm) -> Result<f64> {
    let det = nonsingular_det(lambda)?;
    let l = lambda.values();
    let mut acc = 0.0;
    for mu in 0..3 {
        for al in 0..3 {
            if mu != al {
                acc += b.entry(mu, al).norm_sqr() / (l[mu] * l[al]);
            }
        }
    }
    Ok(p.shifted_trace(lambda) / det * acc)
}

/// Project the diagonal of `b_raw` onto `Σ_μ w_μ B_{μμ̄} = 0`,
/// `w_μ = c − (c Σλ + 2t tan θ̂)/λ_μ`; off-diagonal entries are untouched.
pub fn constraint_project(
    lambda: &RelativeSpectrum,
    p: &PathParams,
    b_raw: &HermitianForm,
) -> HermitianForm {
    let k = p.shifted_trace(lambda);
    let w = lambda.values().map(|l| p.c - k / l);
    let ww: f64 = w.iter().map(|x| x * x).sum();
    if ww == 0.0 {
        return *b_raw;
    }
    let d: [f64; 3] = std::array::from_fn(|m| b_raw.entry(m, m).re);
    let coef = (0..3).map(|m| w[m] * d[m]).sum::<f64>() / ww;
    let mut m = *b_raw.matrix();
    for mu in 0..3 {
        m[(mu, mu)] = C64::new(d[mu] - coef * w[mu], 0.0);
    }
    HermitianForm::hermitian_part(m)
}
