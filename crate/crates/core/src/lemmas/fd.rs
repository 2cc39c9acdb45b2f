//! Finite-difference oracles built on the full-matrix operator
//! `F(M) = (c tr M + 2t tan θ̂) / det M`, with no use of the eigenvalue
//! formulas they are compared against.

use nalgebra::Matrix3;

use crate::algebra::{HermitianForm, PathParams, C64};

pub fn f_matrix(m: &Matrix3<C64>, p: &PathParams) -> f64 {
    let num = p.c * m.trace().re + 2.0 * p.t * p.phase.tan();
    num / m.determinant().re
}

fn diag(lambda: [f64; 3]) -> Matrix3<C64> {
    Matrix3::from_diagonal(&lambda.map(|l| C64::new(l, 0.0)).into())
}

/// `∂F/∂λ_μ` at `diag(λ)` by a five-point stencil with step `1e−3 λ_μ`.
pub fn gradient(lambda: [f64; 3], p: &PathParams) -> [f64; 3] {
    std::array::from_fn(|mu| {
        let h = 1e-3 * lambda[mu];
        let at = |s: f64| {
            let mut l = lambda;
            l[mu] += s * h;
            f_matrix(&diag(l), p)
        };
        (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h)
    })
}

/// `d²/ds² F(diag(λ) + sB)` at `s = 0`, five-point stencil. The step is
/// `1e−3` relative to `‖diag(λ)⁻¹ B‖`; smaller steps lose more to roundoff
/// in the second difference than they gain in truncation.
pub fn second_directional(lambda: [f64; 3], p: &PathParams, b: &HermitianForm) -> f64 {
    let a = diag(lambda);
    let rel = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| b.entry(i, j).norm_sqr() / (lambda[i] * lambda[j]))
        .sum::<f64>()
        .sqrt();
    if rel == 0.0 {
        return 0.0;
    }
    let h = 1e-3 / rel;
    let at = |s: f64| f_matrix(&(a + b.matrix() * C64::new(s * h, 0.0)), p);
    (-at(2.0) + 16.0 * at(1.0) - 30.0 * at(0.0) + 16.0 * at(-1.0) - at(-2.0)) / (12.0 * h * h)
}

/// Magnitude against which the second-derivative error is measured.
pub fn second_directional_scale(lambda: [f64; 3], p: &PathParams, b: &HermitianForm) -> f64 {
    let rel2: f64 = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| b.entry(i, j).norm_sqr() / (lambda[i] * lambda[j]))
        .sum();
    f_matrix(&diag(lambda), p).abs() * rel2
}
