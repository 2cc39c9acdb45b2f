//! Fourier differentiation on the torus grid.

use std::sync::Arc;

use nalgebra::Matrix3;
use rustfft::{Fft, FftPlanner};

use super::{Axis, FormField, ScalarField, TorusGrid};
use crate::algebra::{HermitianForm, C64};
use crate::exec;

const LINES_PER_TASK: usize = 64;

struct AxisPlan {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// FFT plans and wavenumber tables for one grid.
#[derive(Clone)]
pub struct Spectral {
    grid: TorusGrid,
    plans: Arc<[Option<AxisPlan>; 6]>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral")
            .field("grid", &self.grid)
            .finish()
    }
}

/// Signed wavenumber of FFT bin `i` out of `n`; the Nyquist bin maps to `n/2`.
fn wavenumber(i: usize, n: usize) -> f64 {
    if i <= n / 2 {
        i as f64
    } else {
        i as f64 - n as f64
    }
}

impl Spectral {
    pub fn new(grid: TorusGrid) -> Self {
        let mut planner = FftPlanner::new();
        let res = grid.resolution();
        let plans = std::array::from_fn(|a| {
            (res[a] > 1).then(|| AxisPlan {
                forward: planner.plan_fft_forward(res[a]),
                inverse: planner.plan_fft_inverse(res[a]),
            })
        });
        Self {
            grid,
            plans: Arc::new(plans),
        }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    fn transform(&self, data: &mut [C64], inverse: bool) {
        let res = self.grid.resolution();
        let strides = self.grid.strides();
        let len = data.len();
        for axis in 0..6 {
            let Some(plan) = &self.plans[axis] else {
                continue;
            };
            let fft = if inverse {
                &plan.inverse
            } else {
                &plan.forward
            };
            let n = res[axis];
            let stride = strides[axis];
            if stride == 1 {
                exec::for_each_chunk_mut(data, n * LINES_PER_TASK, |chunk| fft.process(chunk));
                continue;
            }
            let outer = len / (n * stride);
            let mut lines = vec![C64::new(0.0, 0.0); len];
            for o in 0..outer {
                for s in 0..stride {
                    let line = (o * stride + s) * n;
                    let base = o * n * stride + s;
                    for k in 0..n {
                        lines[line + k] = data[base + k * stride];
                    }
                }
            }
            exec::for_each_chunk_mut(&mut lines, n * LINES_PER_TASK, |chunk| fft.process(chunk));
            for o in 0..outer {
                for s in 0..stride {
                    let line = (o * stride + s) * n;
                    let base = o * n * stride + s;
                    for k in 0..n {
                        data[base + k * stride] = lines[line + k];
                    }
                }
            }
        }
        if inverse {
            let scale = 1.0 / len as f64;
            for z in data.iter_mut() {
                *z *= scale;
            }
        }
    }

    /// Unnormalised forward transform of real data.
    pub fn forward(&self, values: &[f64]) -> Vec<C64> {
        let mut data: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.transform(&mut data, false);
        data
    }

    /// Normalised inverse transform.
    pub fn inverse(&self, mut data: Vec<C64>) -> Vec<C64> {
        self.transform(&mut data, true);
        data
    }

    /// Wavenumbers `(κ_full, κ_odd)` of a flat spectral index: `κ_odd` zeroes the
    /// Nyquist bin (used for odd-order and mixed derivatives).
    pub fn wavevector(&self, flat: usize) -> ([f64; 6], [f64; 6]) {
        let res = self.grid.resolution();
        let idx = self.grid.multi_index(flat);
        let full: [f64; 6] = std::array::from_fn(|a| wavenumber(idx[a], res[a]));
        let odd = std::array::from_fn(|a| {
            if res[a] > 1 && 2 * idx[a] == res[a] {
                0.0
            } else {
                full[a]
            }
        });
        (full, odd)
    }

    fn active_pair(&self, a: Axis, b: Axis) -> bool {
        self.grid.is_active(a) && self.grid.is_active(b)
    }

    /// Whether entry (j, k) of ∂∂̄ can be nonzero on this grid.
    fn entry_active(&self, j: usize, k: usize) -> bool {
        let (xj, yj, xk, yk) = (Axis::x(j), Axis::y(j), Axis::x(k), Axis::y(k));
        self.active_pair(xj, xk)
            || self.active_pair(yj, yk)
            || self.active_pair(xj, yk)
            || self.active_pair(yj, xk)
    }

    /// Fourier symbol of `∂_{z_j}∂_{z̄_k}` at a spectral index:
    /// `¼[(D_{x_j x_k} + D_{y_j y_k}) + i(D_{x_j y_k} − D_{y_j x_k})]`.
    pub fn hessian_symbol(&self, flat: usize) -> HermitianForm {
        let (full, odd) = self.wavevector(flat);
        let d = |a: Axis, b: Axis| -> f64 {
            if a == b {
                -full[a.index()] * full[a.index()]
            } else {
                -odd[a.index()] * odd[b.index()]
            }
        };
        let m = Matrix3::from_fn(|j, k| {
            let (xj, yj, xk, yk) = (Axis::x(j), Axis::y(j), Axis::x(k), Axis::y(k));
            C64::new(
                0.25 * (d(xj, xk) + d(yj, yk)),
                0.25 * (d(xj, yk) - d(yj, xk)),
            )
        });
        HermitianForm::hermitian_part(m)
    }

    /// Complex Hessian from precomputed Fourier coefficients.
    pub fn complex_hessian_hat(&self, phi_hat: &[C64]) -> FormField {
        let len = self.grid.len();
        let symbols: Vec<HermitianForm> = exec::map_indexed(len, |i| self.hessian_symbol(i));
        let mut entries: [[Option<Vec<C64>>; 3]; 3] = Default::default();
        for j in 0..3 {
            for k in j..3 {
                if !self.entry_active(j, k) {
                    continue;
                }
                let hat: Vec<C64> = phi_hat
                    .iter()
                    .zip(&symbols)
                    .map(|(p, s)| s.entry(j, k) * p)
                    .collect();
                entries[j][k] = Some(self.inverse(hat));
            }
        }
        let values = exec::map_indexed(len, |i| {
            let mut m = Matrix3::<C64>::zeros();
            for j in 0..3 {
                for k in j..3 {
                    if let Some(e) = &entries[j][k] {
                        if j == k {
                            m[(j, j)] = C64::new(e[i].re, 0.0);
                        } else {
                            m[(j, k)] = e[i];
                            m[(k, j)] = e[i].conj();
                        }
                    }
                }
            }
            HermitianForm::hermitian_part(m)
        });
        FormField::new(self.grid, values).expect("grid length matches")
    }

    /// `√−1∂∂̄φ` as a field of Hermitian coefficient matrices `φ_{jk̄}`.
    pub fn complex_hessian(&self, phi: &ScalarField) -> FormField {
        self.complex_hessian_hat(&self.forward(phi.values()))
    }
}

/// `√−1∂∂̄φ` by Fourier differentiation.
pub fn complex_hessian(grid: &TorusGrid, phi: &ScalarField) -> FormField {
    Spectral::new(*grid).complex_hessian(phi)
}
