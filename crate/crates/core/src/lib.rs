//! Continuity-path solver for the deformed Hermitian–Yang–Mills equation on
//! flat complex 3-tori, plus a randomized harness for the pointwise lemmas
//! the method relies on.

// Negated float comparisons are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod algebra;
pub mod error;
pub mod exec;
pub mod lemmas;
pub mod path;
pub mod solver;
pub mod torus;

pub use algebra::{PathParams, PhaseParameter};
pub use error::{Error, Result};
