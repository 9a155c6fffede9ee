//! Spectral tools for the incompressible micropolar system with fractional
//! dissipation on the periodic torus: dyadic analysis, a Picard solver, and
//! numerical verification of the well-posedness estimates.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod io;
pub mod lp;
pub mod ops;
pub mod random;
pub mod solver;
pub mod verify;
pub mod state;

pub use error::{Error, Result};
pub use field::SpectralField;
pub use grid::Grid;
pub use state::{PhysicalParams, State, TheoremMode};
