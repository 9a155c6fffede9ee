//! Direct and successive-approximation solvers.

pub mod config;
pub mod direct;
pub mod initial;
pub mod integrator;
pub mod picard;
pub mod trajectory;
pub mod ynorms;

pub use config::{InitialData, SolverConfig};
pub use direct::direct_solve;
pub use initial::{random_data, single_mode_data};
pub use integrator::{linear_propagate, LinearRates, Stepper};
pub use picard::{picard_step, run_picard, seed_iterate, PicardRun};
pub use trajectory::{BlockNorms, Trajectory};
pub use ynorms::{compute_y_norms, select_parameters, ParameterChoice, YBounds, YIndices, YNorms};
