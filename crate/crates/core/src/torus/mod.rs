//! Periodic fields on the flat torus `C³ / (2πZ)⁶` and their spectral
//! calculus.
//!
//! Real coordinates are ordered `(x₁, x₂, x₃, y₁, y₂, y₃)` with `z_j = x_j + i y_j`.
//! A field depends only on the axes whose resolution is larger than one.

mod background;
mod dump;
mod field;
mod grid;
mod spectral;

pub use background::{
    class_integrals_grid, curvature_phase_integral, potential_from_modes, BackgroundData, TrigKind,
    TrigMode,
};
pub use dump::{read_field, write_field, DUMP_MAGIC, DUMP_VERSION};
pub use field::{quadrature, zero_mean, FormField, ScalarField};
pub use grid::{Axis, TorusGrid, TORUS_VOLUME};
pub use spectral::{complex_hessian, Spectral};
