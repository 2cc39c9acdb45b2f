use std::ops::{Add, Mul, Sub};

use super::{TorusGrid, TORUS_VOLUME};
use crate::algebra::HermitianForm;
use crate::error::{Error, Result};

/// Real scalar field sampled on a torus grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: TorusGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: TorusGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "field has {} values, grid has {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite field value at point {i}"
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: TorusGrid, v: f64) -> Self {
        Self {
            grid,
            values: vec![v; grid.len()],
        }
    }

    /// Sample `f` at every grid point.
    pub fn from_fn(grid: TorusGrid, f: impl Fn([f64; 6]) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self + s · other`.
    pub fn axpy(&self, s: f64, other: &ScalarField) -> ScalarField {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + s * b)
            .collect();
        ScalarField {
            grid: self.grid,
            values,
        }
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<f64> for &ScalarField {
    type Output = ScalarField;
    fn mul(self, s: f64) -> ScalarField {
        ScalarField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }
}

/// Field of Hermitian (1,1)-form coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct FormField {
    grid: TorusGrid,
    values: Vec<HermitianForm>,
}

impl FormField {
    pub fn new(grid: TorusGrid, values: Vec<HermitianForm>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "form field has {} values, grid has {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: TorusGrid, form: HermitianForm) -> Self {
        Self {
            grid,
            values: vec![form; grid.len()],
        }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn values(&self) -> &[HermitianForm] {
        &self.values
    }

    pub fn get(&self, i: usize) -> &HermitianForm {
        &self.values[i]
    }

    /// Pointwise sum.
    pub fn add(&self, other: &FormField) -> FormField {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| *a + *b)
            .collect();
        FormField {
            grid: self.grid,
            values,
        }
    }

    /// Add a constant form at every point.
    pub fn add_constant(&self, form: &HermitianForm) -> FormField {
        FormField {
            grid: self.grid,
            values: self.values.iter().map(|a| *a + *form).collect(),
        }
    }

    pub fn max_hermiticity_defect(&self) -> f64 {
        self.values
            .iter()
            .map(|m| m.hermiticity_defect())
            .fold(0.0, f64::max)
    }
}

/// `∫ f` over the torus against the flat measure, by the trapezoidal rule
/// (spectrally accurate for smooth periodic data).
pub fn quadrature(grid: &TorusGrid, f: &ScalarField) -> f64 {
    debug_assert_eq!(grid, f.grid());
    f.mean() * TORUS_VOLUME
}

/// Remove the ω³-weighted mean; for constant ω this is the plain mean.
pub fn zero_mean(grid: &TorusGrid, phi: &ScalarField) -> ScalarField {
    debug_assert_eq!(grid, phi.grid());
    let m = phi.mean();
    ScalarField {
        grid: *grid,
        values: phi.values.iter().map(|v| v - m).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::Axis;

    fn grid() -> TorusGrid {
        TorusGrid::with_axes(&[(Axis::X1, 16), (Axis::X2, 8)]).unwrap()
    }

    #[test]
    fn quadrature_examples() {
        let g = grid();
        assert!((quadrature(&g, &ScalarField::constant(g, 1.0)) - TORUS_VOLUME).abs() < 1e-9);
        let c = ScalarField::from_fn(g, |p| p[0].cos());
        assert!(quadrature(&g, &c).abs() < 1e-14 * TORUS_VOLUME);
        let c2 = ScalarField::from_fn(g, |p| p[0].cos().powi(2));
        assert!((quadrature(&g, &c2) - 0.5 * TORUS_VOLUME).abs() < 1e-12 * TORUS_VOLUME);
    }

    #[test]
    fn zero_mean_examples() {
        let g = grid();
        let five = ScalarField::constant(g, 5.0);
        assert!(zero_mean(&g, &five).sup_norm() < 1e-15);
        let c = ScalarField::from_fn(g, |p| p[0].cos());
        let z = zero_mean(&g, &c);
        assert!((&z - &c).sup_norm() < 1e-15);
        let mixed = ScalarField::from_fn(g, |p| 3.0 + p[1].sin() + p[0]);
        let once = zero_mean(&g, &mixed);
        let twice = zero_mean(&g, &once);
        assert!((&once - &twice).sup_norm() < 1e-14);
    }

    #[test]
    fn rejects_wrong_length() {
        assert!(ScalarField::new(grid(), vec![0.0; 3]).is_err());
    }
}
