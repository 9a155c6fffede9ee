use crate::error::Result;
use crate::field::SpectralField;
use crate::lp::DyadicPartition;

use super::config::SolverConfig;
use super::integrator::{initial_state, ExplicitTerms, Stepper};
use super::trajectory::Trajectory;

/// Reference solver for the full nonlinear system.
pub fn direct_solve(u0: &SpectralField, w0: &SpectralField, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let partition = DyadicPartition::shared(cfg.grid()?)?;
    let mut state = initial_state(u0, w0, cfg)?;
    let stepper = Stepper::from_config(cfg)?;
    let terms = ExplicitTerms::from_config(cfg);
    let stored = cfg.stored_steps();
    let mut next_store = 1;
    let mut states = Vec::with_capacity(stored.len());
    states.push(state.clone());
    for step in 1..=cfg.steps() {
        state = stepper.step(&state, |s| terms.evaluate(&s.u, s, s))?;
        state.t = step as f64 * cfg.dt;
        if stored[next_store] == step {
            states.push(state.clone());
            next_store += 1;
        }
    }
    Trajectory::new(&partition, states)
}
