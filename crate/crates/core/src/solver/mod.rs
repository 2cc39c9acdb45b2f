//! Newton–Krylov solver for the continuity path and the adaptive walk in t.

mod continuation;
mod linear;
mod newton;
mod state;
mod verify;

pub use continuation::{continue_path, ContinuationTrace, TraceRecord, TRACE_CSV_HEADER};
pub use linear::{gmres, GmresOutcome, LinearizedOperator};
pub use newton::{newton_solve, NewtonOutcome};
pub use state::{evaluate, linearized_coefficients, PathState};
pub use verify::{verify_solution, VerificationReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Stop when `sup |F̃ − 1| ≤ newton_tol`.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub t_step_init: f64,
    pub t_step_min: f64,
    pub t_step_max: f64,
    /// Relative residual target of each linear solve.
    pub linear_tol: f64,
    pub max_linear_iters: usize,
    pub gmres_restart: usize,
    /// Line-search acceptance requires every cone margin above this.
    pub cone_margin_floor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            newton_tol: 1e-11,
            max_newton_iters: 25,
            t_step_init: 0.1,
            t_step_min: 1e-4,
            t_step_max: 0.5,
            linear_tol: 1e-12,
            max_linear_iters: 600,
            gmres_restart: 60,
            cone_margin_floor: 1e-8,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("newton_tol", self.newton_tol),
            ("t_step_min", self.t_step_min),
            ("linear_tol", self.linear_tol),
            ("cone_margin_floor", self.cone_margin_floor),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.t_step_min <= self.t_step_init
            && self.t_step_init <= self.t_step_max
            && self.t_step_max <= 1.0)
        {
            return Err(Error::Domain(
                "need t_step_min <= t_step_init <= t_step_max <= 1".into(),
            ));
        }
        if self.max_newton_iters == 0 || self.max_linear_iters == 0 || self.gmres_restart == 0 {
            return Err(Error::Domain("iteration limits must be positive".into()));
        }
        Ok(())
    }
}
