//! Exit codes and the structured failure report.

use dhym_core::solver::ContinuationTrace;
use dhym_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: u8 = 0;
/// A lemma check failed, or an I/O or internal error.
pub const EXIT_FAILURE: u8 = 1;
/// Bad flags or a config that does not describe a valid run. No outputs.
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_HYPOTHESIS: u8 = 3;
pub const EXIT_STALLED: u8 = 4;
pub const EXIT_NO_CONVERGENCE: u8 = 5;
/// The class has a subcritical or otherwise unusable phase.
pub const EXIT_PHASE: u8 = 6;

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::HypothesisViolated { .. } => EXIT_HYPOTHESIS,
        Error::ContinuationStalled { .. } => EXIT_STALLED,
        Error::NoConvergence { .. } | Error::EllipticityLost { .. } => EXIT_NO_CONVERGENCE,
        Error::UnsupportedPhase { .. }
        | Error::InvalidPhase { .. }
        | Error::InadmissibleClass(_) => EXIT_PHASE,
        Error::DegenerateMetric { .. }
        | Error::NotHermitian { .. }
        | Error::InvalidGrid(_)
        | Error::Domain(_)
        | Error::InvalidSampleSpec(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn kind(err: &Error) -> &'static str {
    match err {
        Error::DegenerateMetric { .. } => "degenerate-metric",
        Error::NotHermitian { .. } => "not-hermitian",
        Error::SingularDeterminant { .. } => "singular-determinant",
        Error::OutsideCone { .. } => "outside-cone",
        Error::InvalidPhase { .. } => "invalid-phase",
        Error::UnsupportedPhase { .. } => "unsupported-phase",
        Error::InadmissibleClass(_) => "inadmissible-class",
        Error::Domain(_) => "domain",
        Error::InvalidGrid(_) => "invalid-grid",
        Error::EllipticityLost { .. } => "ellipticity-lost",
        Error::HypothesisViolated { .. } => "hypothesis-violated",
        Error::NoConvergence { .. } => "no-convergence",
        Error::ContinuationStalled { .. } => "continuation-stalled",
        Error::SamplerStarved { .. } => "sampler-starved",
        Error::InvalidSampleSpec(_) => "invalid-sample-spec",
        Error::Format(_) => "format",
        Error::Io(_) => "io",
    }
}

fn details(err: &Error) -> Value {
    match err {
        Error::HypothesisViolated {
            point,
            min_lambda,
            min_pair_product_margin,
        } => json!({
            "point": point,
            "min_lambda": min_lambda,
            "min_pair_product_margin": min_pair_product_margin,
        }),
        Error::EllipticityLost { t, point, margins } => json!({
            "t": t, "point": point, "margins": margins,
        }),
        Error::NoConvergence {
            t,
            iterations,
            residual,
            reason,
        } => json!({
            "t": t, "iterations": iterations, "residual": residual, "reason": reason,
        }),
        Error::ContinuationStalled { t, step, cause, .. } => json!({
            "t": t, "step": step, "cause": cause,
        }),
        Error::UnsupportedPhase { arg } => json!({ "arg": arg }),
        Error::InvalidPhase { theta_hat, lo, hi } => json!({
            "theta_hat": theta_hat, "lo": lo, "hi": hi,
        }),
        _ => Value::Null,
    }
}

/// Everything needed to replay a failed run: the error, the config that
/// produced it, and the trace accepted before the failure.
#[derive(Debug, Serialize)]
pub struct FailureReport<'a, C: Serialize> {
    pub error: &'static str,
    pub exit_code: u8,
    pub message: String,
    pub details: Value,
    pub config: &'a C,
    pub trace: ContinuationTrace,
}

impl<'a, C: Serialize> FailureReport<'a, C> {
    pub fn new(err: &Error, config: &'a C, trace: Option<&ContinuationTrace>) -> Self {
        let trace = match err {
            Error::ContinuationStalled { trace, .. } => (**trace).clone(),
            _ => trace.cloned().unwrap_or_default(),
        };
        Self {
            error: kind(err),
            exit_code: exit_code(err),
            message: err.to_string(),
            details: details(err),
            config,
            trace,
        }
    }
}
