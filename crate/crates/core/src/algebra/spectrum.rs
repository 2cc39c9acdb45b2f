use nalgebra::{Cholesky, Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{HermitianForm, PhaseParameter, C64};
use crate::error::{Error, Result};

/// Eigenvalues of a form relative to the Kähler metric, sorted descending.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelativeSpectrum {
    lambda: [f64; 3],
}

impl RelativeSpectrum {
    /// Sorts the values descending.
    ///
    /// # Panics
    /// If any value is not finite.
    pub fn new(values: [f64; 3]) -> Self {
        assert!(
            values.iter().all(|v| v.is_finite()),
            "relative spectrum must be finite: {values:?}"
        );
        let mut lambda = values;
        lambda.sort_by(|a, b| b.total_cmp(a));
        Self { lambda }
    }

    pub fn values(&self) -> [f64; 3] {
        self.lambda
    }

    /// 0-based: `get(0)` is the largest eigenvalue.
    pub fn get(&self, i: usize) -> f64 {
        self.lambda[i]
    }

    pub fn sum(&self) -> f64 {
        self.lambda.iter().sum()
    }

    pub fn det(&self) -> f64 {
        self.lambda.iter().product()
    }

    /// Σ_{i<j} λ_i λ_j.
    pub fn sigma2(&self) -> f64 {
        let [a, b, c] = self.lambda;
        a * b + a * c + b * c
    }

    /// Shift every eigenvalue by `s`.
    pub fn shifted(&self, s: f64) -> Self {
        Self::new(self.lambda.map(|l| l + s))
    }

    /// Σ arctan(λ_i), each branch in (−π/2, π/2).
    pub fn lagrangian_phase(&self) -> f64 {
        self.lambda.iter().map(|a| a.atan()).sum()
    }

    /// `Im Z − tan θ̂ Re Z` with `Z = Π (1 + i a_j)`, reading the spectrum as
    /// the curvature eigenvalues `a_j`.
    pub fn dhym_residual(&self, phase: &PhaseParameter) -> f64 {
        let z = self
            .lambda
            .iter()
            .fold(C64::new(1.0, 0.0), |acc, &a| acc * C64::new(1.0, a));
        z.im - phase.tan() * z.re
    }
}

/// A positive-definite Kähler form at a point, factored once so that many
/// relative spectra can be taken against it.
#[derive(Clone, Debug)]
pub struct Metric {
    omega: HermitianForm,
    inv_factor: Matrix3<C64>,
    inverse: HermitianForm,
    det: f64,
}

impl Metric {
    /// Floor on the smallest eigenvalue of ω.
    pub const DEFAULT_FLOOR: f64 = 1e-10;

    pub fn new(omega: HermitianForm) -> Result<Self> {
        Self::with_floor(omega, Self::DEFAULT_FLOOR)
    }

    pub fn with_floor(omega: HermitianForm, floor: f64) -> Result<Self> {
        let eig = SymmetricEigen::new(*omega.matrix()).eigenvalues;
        let min_eigenvalue = eig.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min_eigenvalue > floor) {
            return Err(Error::DegenerateMetric {
                min_eigenvalue,
                floor,
            });
        }
        let degenerate = || Error::DegenerateMetric {
            min_eigenvalue,
            floor,
        };
        let chol = Cholesky::new(*omega.matrix()).ok_or_else(degenerate)?;
        let inv_factor = chol.l().try_inverse().ok_or_else(degenerate)?;
        let inverse = HermitianForm::hermitian_part(chol.inverse());
        Ok(Self {
            omega,
            inv_factor,
            inverse,
            det: eig.iter().product(),
        })
    }

    pub fn identity() -> Self {
        Self::new(HermitianForm::identity()).expect("identity is positive definite")
    }

    pub fn form(&self) -> &HermitianForm {
        &self.omega
    }

    /// ω⁻¹ as a Hermitian matrix.
    pub fn inverse(&self) -> &HermitianForm {
        &self.inverse
    }

    /// det ω, the density of ω³ against the flat volume (up to 3!).
    pub fn det(&self) -> f64 {
        self.det
    }

    /// Eigenvalues of the pencil `(alpha, ω)`: roots of `det(alpha − λω) = 0`.
    pub fn relative_spectrum(&self, alpha: &HermitianForm) -> RelativeSpectrum {
        let m = self.inv_factor * alpha.matrix() * self.inv_factor.adjoint();
        let m = HermitianForm::hermitian_part(m);
        let eig = SymmetricEigen::new(*m.matrix()).eigenvalues;
        RelativeSpectrum::new([eig[0], eig[1], eig[2]])
    }
}

/// Eigenvalues of the endomorphism `A^i_j = α_{jk̄} ω^{ik̄}`, sorted descending.
pub fn relative_spectrum(omega: &HermitianForm, alpha: &HermitianForm) -> Result<RelativeSpectrum> {
    Ok(Metric::new(*omega)?.relative_spectrum(alpha))
}

/// θ(α) = Σ arctan(a_i), in (−3π/2, 3π/2).
pub fn phase(omega: &HermitianForm, alpha: &HermitianForm) -> Result<f64> {
    Ok(relative_spectrum(omega, alpha)?.lagrangian_phase())
}

/// Pointwise residual of `Im((ω − Θ)³) = tan θ̂ Re((ω − Θ)³)`, normalised by ω³.
pub fn dhym_residual(
    omega: &HermitianForm,
    i_theta: &HermitianForm,
    phase: &PhaseParameter,
) -> Result<f64> {
    Ok(relative_spectrum(omega, i_theta)?.dhym_residual(phase))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use super::*;

    #[test]
    fn diagonal_and_proportional_cases() {
        let lam = relative_spectrum(
            &HermitianForm::identity(),
            &HermitianForm::diag([2.0, 3.0, 4.0]),
        )
        .unwrap();
        assert_eq!(lam.values(), [4.0, 3.0, 2.0]);

        let lam = relative_spectrum(
            &HermitianForm::scaled_identity(2.0),
            &HermitianForm::scaled_identity(2.0),
        )
        .unwrap();
        for v in lam.values() {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn coupled_block() {
        // det([[2-x,1],[1,2-x]]) = (x-1)(x-3)
        let alpha =
            HermitianForm::from_real([[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 3.0]]).unwrap();
        let lam = relative_spectrum(&HermitianForm::identity(), &alpha).unwrap();
        let expected = [3.0, 3.0, 1.0];
        for (a, b) in lam.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14, "{lam:?}");
        }
    }

    #[test]
    fn degenerate_metric_is_an_error() {
        let omega = HermitianForm::diag([1.0, 1.0, 1e-12]);
        assert!(matches!(
            relative_spectrum(&omega, &HermitianForm::identity()),
            Err(Error::DegenerateMetric { .. })
        ));
        let omega = HermitianForm::diag([1.0, -1.0, 1.0]);
        assert!(Metric::new(omega).is_err());
    }

    #[test]
    fn phase_examples() {
        let id = HermitianForm::identity();
        assert!((phase(&id, &id).unwrap() - 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert_eq!(phase(&id, &HermitianForm::zero()).unwrap(), 0.0);
        assert!(
            phase(&id, &HermitianForm::diag([1.0, 0.0, -1.0]))
                .unwrap()
                .abs()
                < 1e-16
        );
    }

    #[test]
    fn dhym_residual_examples() {
        let phase = PhaseParameter::from_tan(-1.0).unwrap();
        let id = HermitianForm::identity();
        assert_eq!(dhym_residual(&id, &id, &phase).unwrap(), 0.0);
        assert_eq!(
            dhym_residual(&id, &HermitianForm::zero(), &phase).unwrap(),
            1.0
        );
    }
}
