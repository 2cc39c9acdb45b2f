use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::algebra::ConeMargins;
use crate::error::{Error, Result};
use crate::path::{compute_ct_with_tolerance, PathPoint};
use crate::torus::{class_integrals_grid, BackgroundData, ScalarField};

use super::newton::newton_solve;
use super::SolverConfig;

pub const TRACE_CSV_HEADER: &str =
    "t,c_t,newton_iters,residual_sup,margin_pos,margin_pair_prod,margin_pair_sum,sup_phi,sup_lambda1";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: f64,
    pub c_t: f64,
    pub newton_iters: usize,
    pub residual_sup: f64,
    pub margins: ConeMargins,
    pub sup_phi: f64,
    pub sup_lambda1: f64,
    pub linear_iters: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ContinuationTrace {
    pub records: Vec<TraceRecord>,
}

impl ContinuationTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{TRACE_CSV_HEADER}")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.t,
                r.c_t,
                r.newton_iters,
                r.residual_sup,
                r.margins.min_lambda,
                r.margins.min_pair_product_margin,
                r.margins.min_pair_sum_margin,
                r.sup_phi,
                r.sup_lambda1
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }
}

fn stalled(t: f64, step: f64, cause: String, trace: &ContinuationTrace) -> Error {
    Error::ContinuationStalled {
        t,
        step,
        cause,
        trace: Box::new(trace.clone()),
    }
}

/// Walks `t` from 0 to 1, solving at each accepted point from the previous
/// solution. Steps double after cheap solves and halve after failures.
pub fn continue_path(
    bg: &BackgroundData,
    config: &SolverConfig,
) -> Result<(ScalarField, ContinuationTrace)> {
    config.validate()?;
    let (point, sub) = bg.subsolution_margins();
    if !sub.is_admissible() {
        return Err(Error::HypothesisViolated {
            point,
            min_lambda: sub.min_lambda,
            min_pair_product_margin: sub.min_pair_product_margin,
        });
    }
    let integrals = class_integrals_grid(bg);
    let tol = bg.admissibility_tol();
    let phase = *bg.phase();
    let mut trace = ContinuationTrace::default();

    let record = |trace: &mut ContinuationTrace, p: &PathPoint, out: &super::NewtonOutcome| {
        trace.records.push(TraceRecord {
            t: p.t,
            c_t: p.c_t,
            newton_iters: out.iterations,
            residual_sup: out.residual_sup,
            margins: out.margins,
            sup_phi: out.phi.sup_norm(),
            sup_lambda1: out.sup_lambda1,
            linear_iters: out.linear_iterations,
        });
    };

    let start = compute_ct_with_tolerance(&integrals, 0.0, &phase, tol)?;
    let out = match newton_solve(bg, &ScalarField::zeros(*bg.grid()), &start, config) {
        Ok(out) => out,
        Err(e @ (Error::NoConvergence { .. } | Error::EllipticityLost { .. })) => {
            return Err(stalled(0.0, 0.0, e.to_string(), &trace));
        }
        Err(e) => return Err(e),
    };
    record(&mut trace, &start, &out);
    let mut phi = out.phi;
    let mut t = 0.0;
    let mut dt = config.t_step_init;

    while t < 1.0 {
        let t_new = if t + dt >= 1.0 - 1e-12 { 1.0 } else { t + dt };
        let p = compute_ct_with_tolerance(&integrals, t_new, &phase, tol)?;
        match newton_solve(bg, &phi, &p, config) {
            Ok(out) => {
                record(&mut trace, &p, &out);
                if out.iterations <= 3 {
                    dt = (2.0 * dt).min(config.t_step_max);
                }
                phi = out.phi;
                t = t_new;
            }
            Err(e @ (Error::NoConvergence { .. } | Error::EllipticityLost { .. })) => {
                dt *= 0.5;
                if dt < config.t_step_min {
                    return Err(stalled(t, dt, e.to_string(), &trace));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok((phi, trace))
}
