use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(2π)⁶`, the flat volume of the torus.
pub const TORUS_VOLUME: f64 = 61_528.908_388_819_5;

/// Real coordinate axes in storage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X1,
    X2,
    X3,
    Y1,
    Y2,
    Y3,
}

impl Axis {
    pub const ALL: [Axis; 6] = [Axis::X1, Axis::X2, Axis::X3, Axis::Y1, Axis::Y2, Axis::Y3];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Real part `x_j` of `z_j`.
    pub fn x(j: usize) -> Axis {
        Self::ALL[j]
    }

    /// Imaginary part `y_j` of `z_j`.
    pub fn y(j: usize) -> Axis {
        Self::ALL[j + 3]
    }
}

/// Uniform grid over the six real axes. Inactive axes have one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusGrid {
    resolution: [usize; 6],
}

impl TorusGrid {
    pub const MIN_RESOLUTION: usize = 8;

    /// Every entry must be 1 (inactive) or even and at least 8.
    pub fn new(resolution: [usize; 6]) -> Result<Self> {
        for (a, &n) in resolution.iter().enumerate() {
            if n != 1 && (n % 2 != 0 || n < Self::MIN_RESOLUTION) {
                return Err(Error::InvalidGrid(format!(
                    "axis {:?} has resolution {n}; expected 1 or an even number >= {}",
                    Axis::ALL[a],
                    Self::MIN_RESOLUTION
                )));
            }
        }
        if resolution.iter().all(|&n| n == 1) {
            return Err(Error::InvalidGrid("no active axes".into()));
        }
        Ok(Self { resolution })
    }

    /// Grid with the listed axes active.
    pub fn with_axes(axes: &[(Axis, usize)]) -> Result<Self> {
        let mut resolution = [1; 6];
        for &(a, n) in axes {
            resolution[a.index()] = n;
        }
        Self::new(resolution)
    }

    pub fn resolution(&self) -> [usize; 6] {
        self.resolution
    }

    pub fn dims_active(&self) -> usize {
        self.resolution.iter().filter(|&&n| n > 1).count()
    }

    pub fn is_active(&self, axis: Axis) -> bool {
        self.resolution[axis.index()] > 1
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major strides; the last axis is contiguous.
    pub fn strides(&self) -> [usize; 6] {
        let mut s = [1; 6];
        for a in (0..5).rev() {
            s[a] = s[a + 1] * self.resolution[a + 1];
        }
        s
    }

    /// Largest grid spacing over active axes.
    pub fn max_spacing(&self) -> f64 {
        self.resolution
            .iter()
            .filter(|&&n| n > 1)
            .map(|&n| 2.0 * PI / n as f64)
            .fold(0.0, f64::max)
    }

    /// Multi-index of a flat index.
    pub fn multi_index(&self, mut flat: usize) -> [usize; 6] {
        let mut idx = [0; 6];
        for a in (0..6).rev() {
            idx[a] = flat % self.resolution[a];
            flat /= self.resolution[a];
        }
        idx
    }

    /// Coordinates of a grid point.
    pub fn point(&self, flat: usize) -> [f64; 6] {
        let idx = self.multi_index(flat);
        std::array::from_fn(|a| 2.0 * PI * idx[a] as f64 / self.resolution[a] as f64)
    }
}
