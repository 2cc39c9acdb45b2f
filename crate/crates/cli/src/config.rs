//! Run configuration.
//!
//! A config is a JSON object:
//!
//! ```json
//! {
//!   "omega":   [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
//!   "omega0":  [[2, 0, 0], [0, 2, 0], [0, 0, 2]],
//!   "theta_hat": {"pi_multiple": 0.75},
//!   "psi0": [{"amplitude": 0.05, "wavevector": [1, 0, 0, 0, 0, 0], "kind": "cos"}],
//!   "grid": {"resolution": [16, 1, 1, 1, 1, 1]},
//!   "solver": {"newton_tol": 1e-11},
//!   "outputs": {"trace": "trace.csv"}
//! }
//! ```
//!
//! Matrices are 3×3 Hermitian in the coordinate frame `dz_i ∧ dz̄_j`; an entry
//! is a real number or a `[re, im]` pair. Angles are in radians unless given
//! as `{"pi_multiple": m}` (θ̂ = mπ) or `{"tan": v}` (θ̂ in (π/2, 3π/2) with
//! tan θ̂ = v). Coordinates `x_j, y_j` run over `[0, 2π)` and the wavevector
//! of a ψ₀ mode is ordered `(x₁, x₂, x₃, y₁, y₂, y₃)`.
//!
//! The background is either `omega0` together with `theta_hat`, or
//! `curvature` (the constant part of the curvature form) with an optional
//! `theta_hat` that must agree with the class. Output paths are relative to
//! `--out`.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::{bail, Context};
use dhym_core::algebra::{HermitianForm, C64};
use dhym_core::solver::SolverConfig;
use dhym_core::torus::{BackgroundData, TorusGrid, TrigMode};
use dhym_core::PhaseParameter;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn value(self) -> C64 {
        match self {
            Entry::Real(re) => C64::new(re, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

pub type MatrixSpec = [[Entry; 3]; 3];

fn form(m: &MatrixSpec, name: &str) -> anyhow::Result<HermitianForm> {
    let rows = m.map(|row| row.map(Entry::value));
    HermitianForm::from_rows(rows)
        .with_context(|| format!("`{name}` is not a valid Hermitian matrix"))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleSpec {
    Radians(f64),
    PiMultiple { pi_multiple: f64 },
    Tan { tan: f64 },
}

impl AngleSpec {
    pub fn phase(self) -> dhym_core::Result<PhaseParameter> {
        match self {
            AngleSpec::Radians(theta) => PhaseParameter::new(theta),
            AngleSpec::PiMultiple { pi_multiple } => PhaseParameter::new(pi_multiple * PI),
            AngleSpec::Tan { tan } => PhaseParameter::from_tan(tan),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Points per axis in `(x₁, x₂, x₃, y₁, y₂, y₃)` order; 1 marks an
    /// inactive axis.
    pub resolution: [usize; 6],
    /// Optional cross-check on the number of active axes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims_active: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub trace: String,
    pub phi: String,
    pub verification: String,
    pub failure: String,
}

impl Default for OutputPaths {
    fn default() -> Self {
        Self {
            trace: "trace.csv".into(),
            phi: "phi.gma3".into(),
            verification: "verification.json".into(),
            failure: "failure.json".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub omega: MatrixSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_hat: Option<AngleSpec>,
    #[serde(default)]
    pub psi0: Vec<TrigMode>,
    pub grid: GridSpec,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub outputs: OutputPaths,
}

/// A config that parsed and passed the structural checks; building the
/// background can still fail on the mathematics.
#[derive(Clone, Debug)]
pub struct Validated {
    pub raw: RunConfig,
    pub grid: TorusGrid,
    pub omega: HermitianForm,
    pub background: BackgroundSource,
}

#[derive(Clone, Debug)]
pub enum BackgroundSource {
    Constant {
        omega0: HermitianForm,
        theta_hat: AngleSpec,
    },
    Curvature {
        curvature: HermitianForm,
        theta_hat: Option<AngleSpec>,
    },
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("malformed config {}", path.display()))
    }

    /// Structural validation: everything that does not need the background
    /// to be built.
    pub fn validate(self) -> anyhow::Result<Validated> {
        let grid = TorusGrid::new(self.grid.resolution)?;
        if let Some(d) = self.grid.dims_active {
            if d != grid.dims_active() {
                bail!(
                    "grid.dims_active = {d} but the resolution has {} active axes",
                    grid.dims_active()
                );
            }
        }
        for m in &self.psi0 {
            m.check_resolved(&grid)?;
        }
        self.solver.validate()?;
        let omega = form(&self.omega, "omega")?;
        let background = match (&self.omega0, &self.curvature) {
            (Some(m), None) => BackgroundSource::Constant {
                omega0: form(m, "omega0")?,
                theta_hat: self.theta_hat.context("`omega0` requires `theta_hat`")?,
            },
            (None, Some(m)) => BackgroundSource::Curvature {
                curvature: form(m, "curvature")?,
                theta_hat: self.theta_hat,
            },
            (Some(_), Some(_)) => bail!("give either `omega0` or `curvature`, not both"),
            (None, None) => bail!("one of `omega0` or `curvature` is required"),
        };
        Ok(Validated {
            raw: self,
            grid,
            omega,
            background,
        })
    }
}

impl Validated {
    /// Build the background; the subsolution condition is checked first.
    pub fn build(&self) -> dhym_core::Result<BackgroundData> {
        match &self.background {
            BackgroundSource::Constant { omega0, theta_hat } => BackgroundData::from_modes(
                self.grid,
                self.omega,
                *omega0,
                &self.raw.psi0,
                theta_hat.phase()?,
            ),
            BackgroundSource::Curvature {
                curvature,
                theta_hat,
            } => BackgroundData::from_curvature(
                self.grid,
                self.omega,
                *curvature,
                &self.raw.psi0,
                theta_hat.map(AngleSpec::phase).transpose()?,
            ),
        }
    }
}
