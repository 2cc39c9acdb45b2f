use serde::{Deserialize, Serialize};

use super::{quadrature, FormField, ScalarField, Spectral, TorusGrid, TORUS_VOLUME};
use crate::algebra::{
    subsolution_margins, HermitianForm, Metric, PhaseParameter, SubsolutionMargins, C64,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::path::{resolve_theta_hat, ClassIntegrals, CONSTANT_ADMISSIBILITY_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigKind {
    Cos,
    Sin,
}

/// One term `amplitude · cos(k·x)` or `amplitude · sin(k·x)` of a potential.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigMode {
    pub amplitude: f64,
    /// Integer wavevector over `(x₁, x₂, x₃, y₁, y₂, y₃)`.
    pub wavevector: [i32; 6],
    pub kind: TrigKind,
}

impl TrigMode {
    pub fn eval(&self, p: [f64; 6]) -> f64 {
        let arg: f64 = (0..6).map(|a| f64::from(self.wavevector[a]) * p[a]).sum();
        match self.kind {
            TrigKind::Cos => self.amplitude * arg.cos(),
            TrigKind::Sin => self.amplitude * arg.sin(),
        }
    }

    /// Representable without aliasing: nonzero only on active axes and below
    /// the Nyquist frequency.
    pub fn check_resolved(&self, grid: &TorusGrid) -> Result<()> {
        let res = grid.resolution();
        for a in 0..6 {
            let k = self.wavevector[a].unsigned_abs() as usize;
            if k != 0 && (res[a] == 1 || 2 * k >= res[a]) {
                return Err(Error::InvalidGrid(format!(
                    "mode {:?} is not resolved on axis {a} with {} points",
                    self.wavevector, res[a]
                )));
            }
        }
        Ok(())
    }
}

/// Sample a trigonometric potential on the grid.
pub fn potential_from_modes(grid: TorusGrid, modes: &[TrigMode]) -> Result<ScalarField> {
    for m in modes {
        m.check_resolved(&grid)?;
    }
    Ok(ScalarField::from_fn(grid, |p| {
        modes.iter().map(|m| m.eval(p)).sum()
    }))
}

/// Background data of a solve: constant Kähler form ω, and
/// `Ω₀ = Ω_const + √−1∂∂̄ψ₀` in a fixed class with phase θ̂.
#[derive(Clone, Debug)]
pub struct BackgroundData {
    spectral: Spectral,
    metric: Metric,
    omega0_constant: HermitianForm,
    psi0: ScalarField,
    omega0: FormField,
    phase: PhaseParameter,
    integrals: ClassIntegrals,
}

fn worst_subsolution_point(
    metric: &Metric,
    field: &FormField,
    phase: &PhaseParameter,
) -> (usize, SubsolutionMargins) {
    let margins = exec::map_slice(field.values(), |f| {
        subsolution_margins(&metric.relative_spectrum(f), phase)
    });
    margins
        .into_iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            a.min_lambda
                .min(a.min_pair_product_margin)
                .total_cmp(&b.min_lambda.min(b.min_pair_product_margin))
        })
        .expect("grid is nonempty")
}

impl BackgroundData {
    /// Validates, in order: the subsolution condition at every grid point,
    /// the class identity, and agreement of θ̂ with the curvature class.
    pub fn new(
        grid: TorusGrid,
        omega: HermitianForm,
        omega0_constant: HermitianForm,
        psi0: ScalarField,
        phase: PhaseParameter,
    ) -> Result<Self> {
        if psi0.grid() != &grid {
            return Err(Error::InvalidGrid("psi0 lives on a different grid".into()));
        }
        let metric = Metric::new(omega)?;
        let spectral = Spectral::new(grid);
        let omega0 = spectral
            .complex_hessian(&psi0)
            .add_constant(&omega0_constant);

        let (point, worst) = worst_subsolution_point(&metric, &omega0, &phase);
        if !worst.is_admissible() {
            return Err(Error::HypothesisViolated {
                point,
                min_lambda: worst.min_lambda,
                min_pair_product_margin: worst.min_pair_product_margin,
            });
        }

        let integrals = grid_integrals(&metric, &omega0);
        integrals.check_admissible(&phase, grid_admissibility_tol(&grid))?;

        let curvature = omega0.add_constant(&(omega * phase.tan()));
        resolve_theta_hat(curvature_phase_integral(&metric, &curvature), Some(&phase))?;

        Ok(Self {
            spectral,
            metric,
            omega0_constant,
            psi0,
            omega0,
            phase,
            integrals,
        })
    }

    pub fn from_modes(
        grid: TorusGrid,
        omega: HermitianForm,
        omega0_constant: HermitianForm,
        modes: &[TrigMode],
        phase: PhaseParameter,
    ) -> Result<Self> {
        let psi0 = potential_from_modes(grid, modes)?;
        Self::new(grid, omega, omega0_constant, psi0, phase)
    }

    /// Build from the curvature representative `√−1Θ = curvature + √−1∂∂̄ψ₀`;
    /// θ̂ is read off the class integral, and `Ω = √−1Θ − tan θ̂ ω`.
    pub fn from_curvature(
        grid: TorusGrid,
        omega: HermitianForm,
        curvature_constant: HermitianForm,
        modes: &[TrigMode],
        given_phase: Option<PhaseParameter>,
    ) -> Result<Self> {
        let psi0 = potential_from_modes(grid, modes)?;
        let metric = Metric::new(omega)?;
        let curvature = Spectral::new(grid)
            .complex_hessian(&psi0)
            .add_constant(&curvature_constant);
        let phase = resolve_theta_hat(
            curvature_phase_integral(&metric, &curvature),
            given_phase.as_ref(),
        )?;
        let omega0_constant = curvature_constant - omega * phase.tan();
        Self::new(grid, omega, omega0_constant, psi0, phase)
    }

    pub fn grid(&self) -> &TorusGrid {
        self.spectral.grid()
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn omega(&self) -> &HermitianForm {
        self.metric.form()
    }

    pub fn omega0_constant(&self) -> &HermitianForm {
        &self.omega0_constant
    }

    pub fn psi0(&self) -> &ScalarField {
        &self.psi0
    }

    /// `Ω₀ = Ω_const + √−1∂∂̄ψ₀` pointwise.
    pub fn omega0(&self) -> &FormField {
        &self.omega0
    }

    pub fn phase(&self) -> &PhaseParameter {
        &self.phase
    }

    pub fn integrals(&self) -> &ClassIntegrals {
        &self.integrals
    }

    /// Relative tolerance used for the class identity on this grid.
    pub fn admissibility_tol(&self) -> f64 {
        grid_admissibility_tol(self.grid())
    }

    /// Worst pointwise subsolution margins of Ω₀ and where they occur.
    pub fn subsolution_margins(&self) -> (usize, SubsolutionMargins) {
        worst_subsolution_point(&self.metric, &self.omega0, &self.phase)
    }

    /// `∫(ω + √−1·√−1Θ)³` for the background curvature `Ω₀ + tan θ̂ ω`.
    pub fn curvature_integral(&self) -> C64 {
        let curvature = self
            .omega0
            .add_constant(&(*self.omega() * self.phase.tan()));
        curvature_phase_integral(&self.metric, &curvature)
    }
}

/// `max(1e−8, 10 h²)` with `h` the largest grid spacing.
fn grid_admissibility_tol(grid: &TorusGrid) -> f64 {
    let h = grid.max_spacing();
    CONSTANT_ADMISSIBILITY_TOL.max(10.0 * h * h)
}

fn grid_integrals(metric: &Metric, field: &FormField) -> ClassIntegrals {
    let grid = *field.grid();
    let spectra = exec::map_slice(field.values(), |f| metric.relative_spectrum(f));
    let s3 = ScalarField::new(grid, spectra.iter().map(|l| l.det()).collect()).expect("finite");
    let s1 = ScalarField::new(grid, spectra.iter().map(|l| l.sum()).collect()).expect("finite");
    let vol = metric.det();
    ClassIntegrals::new(
        vol * quadrature(&grid, &s3),
        vol * quadrature(&grid, &s1),
        vol * TORUS_VOLUME,
    )
}

/// `(∫Ω₀³, ∫3ω²Ω₀, ∫ω³)` by pointwise σ-polynomials and quadrature, with
/// `∫ω³` normalised to `det ω · (2π)⁶`.
pub fn class_integrals_grid(bg: &BackgroundData) -> ClassIntegrals {
    grid_integrals(&bg.metric, &bg.omega0)
}

/// `Z = ∫ Π_j (1 + i a_j) ω³` for the curvature field `alpha`.
pub fn curvature_phase_integral(metric: &Metric, alpha: &FormField) -> C64 {
    let z = exec::map_slice(alpha.values(), |f| {
        metric
            .relative_spectrum(f)
            .values()
            .iter()
            .fold(C64::new(1.0, 0.0), |acc, &a| acc * C64::new(1.0, a))
    });
    let mean = z.iter().fold(C64::new(0.0, 0.0), |acc, v| acc + v) / z.len() as f64;
    mean * (metric.det() * TORUS_VOLUME)
}
