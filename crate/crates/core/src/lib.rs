//! Sharp Bohr and Bohr–Rogosinski radii for bounded analytic functions
//! composed with Schwarz maps.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`]: truncated power series, certified members of the unit ball
//!   of `H∞` and the Schwarz–Pick tail bound.
//! * [`schwarz`]: Schwarz maps `ω(z) = zᵏ g(z)`.
//! * [`functionals`]: every Bohr-type functional as a value-plus-tail
//!   enclosure.
//! * [`radii`]: bracketed root finding for the radius equations, closed-form
//!   radii and the reference table.
//! * [`sharpness`]: auxiliary functions of the extremal arguments and the
//!   witness search above each radius.
//! * [`multidim`]: homogeneous expansions in several variables and
//!   verification by complex-line sections.
//! * [`verify`]: seeded Monte-Carlo verification below each radius.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod functionals;
pub mod multidim;
pub mod radii;
pub mod schwarz;
pub mod series;
pub mod sharpness;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Absolute slack used in every inequality assertion.
pub const EPS_FLOAT: f64 = 1e-9;
