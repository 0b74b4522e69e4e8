//! Numerics for the minimal-length deformation `[X, P] = i hbar (1 + beta p^2)`.
//!
//! Two realizations of the position operator are compared:
//! the symmetrized `X = x + beta p x p` under the ordinary inner product, and
//! the KMM operator `i hbar (1 + beta p^2) d/dp` under the weighted measure
//! `dp / (1 + beta p^2)`. Every closed-form overlap, lattice, completeness
//! sum and position profile of these models can be checked against direct
//! quadrature with the modules below.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod eigenbasis;
pub mod error;
pub mod experiments;
pub mod fourier;
pub mod maxloc;
pub mod operators;
pub mod params;
pub mod quadrature;
pub mod state;
pub mod vacuum;

pub use error::{Error, Result};
pub use params::ModelParams;
pub use quadrature::{IntegralResult, QuadratureConfig};
pub use state::{GridState, Measure, StateSpec};
