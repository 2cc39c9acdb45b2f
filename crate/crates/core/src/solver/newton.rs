use crate::algebra::ConeMargins;
use crate::error::{Error, Result};
use crate::path::PathPoint;
use crate::torus::{zero_mean, BackgroundData, ScalarField};

use super::linear::{gmres, project_mean_zero, LinearizedOperator};
use super::state::{check_elliptic, coefficient_field, evaluate, PathState};
use super::SolverConfig;

const MAX_HALVINGS: usize = 40;
const ARMIJO: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub phi: ScalarField,
    pub iterations: usize,
    pub residual_sup: f64,
    /// `sup |F̃ − 1|` before each iteration and at exit.
    pub residual_history: Vec<f64>,
    pub linear_iterations: usize,
    pub margins: ConeMargins,
    pub sup_lambda1: f64,
}

fn no_convergence(state: &PathState, iterations: usize, reason: impl Into<String>) -> Error {
    Error::NoConvergence {
        t: state.params.t,
        iterations,
        residual: state.residual_sup,
        reason: reason.into(),
    }
}

/// Damped Newton–Krylov for `F̃(λ[Ω_φ]) = 1` at a fixed path point, on
/// mean-zero potentials.
pub fn newton_solve(
    bg: &BackgroundData,
    phi_init: &ScalarField,
    path: &PathPoint,
    config: &SolverConfig,
) -> Result<NewtonOutcome> {
    if phi_init.grid() != bg.grid() {
        return Err(Error::InvalidGrid(
            "initial potential lives on a different grid".into(),
        ));
    }
    let params = path.params();
    let mut phi = zero_mean(bg.grid(), phi_init);
    let mut state = evaluate(bg, &phi, &params);
    if !state.margins.is_admissible() {
        check_elliptic(&state)?;
        let i = state.worst_margin_point;
        return Err(Error::EllipticityLost {
            t: path.t,
            point: i,
            margins: crate::algebra::cone_check(&state.spectra[i], &params),
        });
    }

    let mut history = vec![state.residual_sup];
    let mut iterations = 0;
    let mut linear_iterations = 0;
    while state.residual_sup > config.newton_tol {
        if iterations == config.max_newton_iters {
            return Err(no_convergence(
                &state,
                iterations,
                "iteration limit reached",
            ));
        }
        check_elliptic(&state)?;
        let op = LinearizedOperator::new(bg.spectral(), coefficient_field(bg, &state));
        let mut rhs: Vec<f64> = state.gma.iter().map(|g| -g).collect();
        project_mean_zero(&mut rhs);
        let (du, lin) = gmres(
            |u| op.apply(u),
            |r| op.precondition(r),
            &rhs,
            config.linear_tol,
            config.gmres_restart,
            config.max_linear_iters,
        );
        linear_iterations += lin.iterations;
        let du = ScalarField::new(*bg.grid(), du).map_err(|_| {
            no_convergence(
                &state,
                iterations,
                "linear solve produced non-finite values",
            )
        })?;

        let merit = state.gma_l2();
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial = phi.axpy(step, &du);
            let ts = evaluate(bg, &trial, &params);
            let inside = ts.margins.at_least(config.cone_margin_floor);
            let decrease = ts.gma_l2() <= (1.0 - ARMIJO * step) * merit
                || ts.residual_sup <= config.newton_tol;
            if inside && decrease {
                accepted = Some((trial, ts));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, ts)) = accepted else {
            return Err(no_convergence(&state, iterations, "line search failed"));
        };
        phi = trial;
        state = ts;
        iterations += 1;
        history.push(state.residual_sup);
    }

    Ok(NewtonOutcome {
        phi,
        iterations,
        residual_sup: state.residual_sup,
        residual_history: history,
        linear_iterations,
        margins: state.margins,
        sup_lambda1: state.sup_lambda1,
    })
}
