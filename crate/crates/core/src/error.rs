use thiserror::Error;

use crate::algebra::ConeMargins;
use crate::solver::ContinuationTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "degenerate metric: smallest eigenvalue {min_eigenvalue:e} is below the floor {floor:e}"
    )]
    DegenerateMetric { min_eigenvalue: f64, floor: f64 },

    #[error("matrix is not Hermitian (max |M - M*| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("singular determinant: relative spectrum {lambda:?} has a zero eigenvalue")]
    SingularDeterminant { lambda: [f64; 3] },

    #[error("outside cone: lambda1*lambda2 - c*sec^2 = {denominator:e} is not positive")]
    OutsideCone { denominator: f64 },

    #[error("phase angle {theta_hat} is outside ({lo}, {hi})")]
    InvalidPhase { theta_hat: f64, lo: f64, hi: f64 },

    #[error("unsupported phase: Arg(Z) = {arg} lies in the subcritical range (-pi/2, pi/2]")]
    UnsupportedPhase { arg: f64 },

    #[error("inadmissible class: {0}")]
    InadmissibleClass(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("ellipticity lost at grid point {point} (t = {t}): margins {margins:?}")]
    EllipticityLost {
        t: f64,
        point: usize,
        margins: ConeMargins,
    },

    #[error("subsolution hypothesis violated at grid point {point}: lambda_min = {min_lambda:e}, pair-product margin = {min_pair_product_margin:e}")]
    HypothesisViolated {
        point: usize,
        min_lambda: f64,
        min_pair_product_margin: f64,
    },

    #[error("Newton iteration did not converge at t = {t} after {iterations} iterations (residual {residual:e}): {reason}")]
    NoConvergence {
        t: f64,
        iterations: usize,
        residual: f64,
        reason: String,
    },

    #[error("continuation stalled at t = {t} with step {step:e}: {cause}")]
    ContinuationStalled {
        t: f64,
        step: f64,
        cause: String,
        trace: Box<ContinuationTrace>,
    },

    #[error("sampler starved: {attempts} attempts without an admissible point")]
    SamplerStarved { attempts: usize },

    #[error("invalid sample spec: {0}")]
    InvalidSampleSpec(String),

    #[error("field dump format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
