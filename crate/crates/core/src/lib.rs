//! Long-time and short-time similarity asymptotics of the one-dimensional
//! heat equation and of the graph curvature flow, for bounded initial data
//! that oscillate slowly on logarithmic scales.
//!
//! The pieces:
//!
//! - [`kernels`]: heat kernel, similarity profile `F`, bound kernel `G`, envelope `rho_L`.
//! - [`initial_data`]: catalog of initial values with exact derivatives and metadata.
//! - [`semigroup`]: `e^{t Laplacian} u0` by convolution quadrature, in physical and
//!   similarity variables, plus window averages and the rescaled-frame residual.
//! - [`profile_bounds`]: the two-sided profile, its error, and the explicit bounds.
//! - [`curvature_flow`]: finite differences for `u_t = u_xx / (1 + u_x^2)` and its
//!   linear twin.
//! - [`experiments`]: declarative runner producing CSV, SVG, and JSON files.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curvature_flow;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod initial_data;
pub mod kernels;
pub mod oracle;
pub mod profile_bounds;
pub mod quadrature;
pub mod semigroup;

pub use error::{Error, Result};
pub use grid::GridFunction;
pub use initial_data::{DecayClass, InitialDatum};
pub use quadrature::QuadratureSpec;
