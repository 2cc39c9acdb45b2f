#![allow(dead_code)]

use dhym_core::algebra::HermitianForm;
use dhym_core::torus::{Axis, BackgroundData, TorusGrid, TrigKind, TrigMode};
use dhym_core::PhaseParameter;

pub mod oracle;

pub fn mode(amplitude: f64, wavevector: [i32; 6], kind: TrigKind) -> TrigMode {
    TrigMode {
        amplitude,
        wavevector,
        kind,
    }
}

pub fn baseline_phase() -> PhaseParameter {
    PhaseParameter::from_tan(-1.0).unwrap()
}

/// ω = I, Ω₀ = 2I + ∂∂̄ψ₀, θ̂ = 3π/4.
pub fn baseline_background(grid: TorusGrid, modes: &[TrigMode]) -> BackgroundData {
    BackgroundData::from_modes(
        grid,
        HermitianForm::identity(),
        HermitianForm::scaled_identity(2.0),
        modes,
        baseline_phase(),
    )
    .unwrap()
}

/// The regression fixture: ψ₀ = 0.05 cos x₁ on the (x₁, x₂) plane.
pub fn cos_fixture(n: usize) -> BackgroundData {
    let grid = TorusGrid::with_axes(&[(Axis::X1, n), (Axis::X2, n)]).unwrap();
    baseline_background(grid, &[mode(0.05, [1, 0, 0, 0, 0, 0], TrigKind::Cos)])
}

/// A background whose solution is not just `−ψ₀`: the modes couple through
/// the determinant.
pub fn coupled_fixture(n: usize) -> BackgroundData {
    let grid = TorusGrid::with_axes(&[(Axis::X1, n), (Axis::X2, n)]).unwrap();
    baseline_background(
        grid,
        &[
            mode(0.8, [1, 0, 0, 0, 0, 0], TrigKind::Cos),
            mode(0.6, [0, 1, 0, 0, 0, 0], TrigKind::Sin),
            mode(0.4, [1, 1, 0, 0, 0, 0], TrigKind::Cos),
        ],
    )
}

/// Non-identity ω, complex off-diagonal Hessian entries, θ̂ read off the
/// curvature class.
pub fn twisted_fixture(n: usize) -> BackgroundData {
    let grid = TorusGrid::with_axes(&[(Axis::X1, n), (Axis::Y2, n)]).unwrap();
    let omega = HermitianForm::diag([1.0, 1.5, 0.8]);
    let curvature = HermitianForm::diag([1.2, 1.5, 1.04]);
    BackgroundData::from_curvature(
        grid,
        omega,
        curvature,
        &[
            mode(0.5, [1, 0, 0, 0, 1, 0], TrigKind::Cos),
            mode(0.3, [1, 0, 0, 0, 0, 0], TrigKind::Sin),
        ],
        None,
    )
    .unwrap()
}
