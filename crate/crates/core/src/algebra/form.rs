use std::ops::{Add, Mul, Sub};

use nalgebra::Matrix3;
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Coefficients of a real (1,1)-form in the frame `√−1 dz^i ∧ dz̄^j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianForm(Matrix3<C64>);

impl HermitianForm {
    /// Relative tolerance on `max |M − M*|` accepted by [`HermitianForm::new`].
    pub const HERMITICITY_TOL: f64 = 1e-12;

    /// Checks Hermiticity, then stores the exact Hermitian part.
    pub fn new(m: Matrix3<C64>) -> Result<Self> {
        let defect = (m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if !(defect <= Self::HERMITICITY_TOL * scale) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self::hermitian_part(m))
    }

    /// `(M + M*) / 2`, no checks.
    pub fn hermitian_part(m: Matrix3<C64>) -> Self {
        Self((m + m.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn from_rows(rows: [[C64; 3]; 3]) -> Result<Self> {
        Self::new(Matrix3::from_fn(|i, j| rows[i][j]))
    }

    pub fn from_real(rows: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(Matrix3::from_fn(|i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn diag(d: [f64; 3]) -> Self {
        Self(Matrix3::from_diagonal(&nalgebra::Vector3::new(
            C64::new(d[0], 0.0),
            C64::new(d[1], 0.0),
            C64::new(d[2], 0.0),
        )))
    }

    pub fn identity() -> Self {
        Self::scaled_identity(1.0)
    }

    pub fn scaled_identity(s: f64) -> Self {
        Self::diag([s; 3])
    }

    pub fn zero() -> Self {
        Self(Matrix3::zeros())
    }

    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Real trace of `self · other` (both Hermitian).
    pub fn trace_product(&self, other: &HermitianForm) -> f64 {
        let mut acc = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                acc += (self.0[(k, j)] * other.0[(j, k)]).re;
            }
        }
        acc
    }
}

impl Add for HermitianForm {
    type Output = HermitianForm;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for HermitianForm {
    type Output = HermitianForm;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul<f64> for HermitianForm {
    type Output = HermitianForm;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0 * C64::new(rhs, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Matrix3::<C64>::identity();
        m[(0, 1)] = C64::new(1.0, 0.5);
        assert!(matches!(
            HermitianForm::new(m),
            Err(Error::NotHermitian { .. })
        ));
        m[(1, 0)] = C64::new(1.0, -0.5);
        assert!(HermitianForm::new(m).is_ok());
    }

    #[test]
    fn trace_product_of_identities() {
        let a = HermitianForm::scaled_identity(2.0);
        assert_eq!(a.trace_product(&HermitianForm::identity()), 6.0);
    }
}
