//! Randomised verification of the pointwise inequalities behind the method.
//!
//! Every check draws its samples from a per-index ChaCha stream, so a report
//! is bit-identical for a given [`SampleSpec`] whatever the thread count.

mod checks;
pub mod fd;
mod report;
mod sampler;

pub use checks::{
    boundary_stages, check_boundary_exclusion, check_convexity_lemma, check_ct_lemma,
    check_discriminant, check_discriminant_with, check_euler_bound, ct_slacks, run_all,
    CT_TGRID_POINTS,
};
pub use report::{LemmaId, LemmaReport, WorstSample};
pub use sampler::{
    sample_admissible_background, sample_cone_point, sample_hermitian, sample_rng, ConePoint,
    SampleSpec, MAX_ATTEMPTS,
};
