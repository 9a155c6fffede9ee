//! Successive approximations. Iterate `n+1` solves the linear system with
//! transport and coupling frozen at iterate `n`:
//!
//! ```text
//! ∂ₜu⁽ⁿ⁺¹⁾ + (ν+k)(−Δ)^α u⁽ⁿ⁺¹⁾ = P(−u⁽ⁿ⁾·∇u⁽ⁿ⁺¹⁾) + 2k∇×w⁽ⁿ⁾
//! ∂ₜw⁽ⁿ⁺¹⁾ + γ(−Δ)^β w⁽ⁿ⁺¹⁾ + 4k w⁽ⁿ⁺¹⁾ = −2k∇×u⁽ⁿ⁾ − u⁽ⁿ⁾·∇w⁽ⁿ⁺¹⁾
//! ```
//!
//! with data `S_{n+1}u₀`, `S_{n+1}w₀`. In theorem2 mode the `w` equation is
//! damped by `4k + γ` and has no dissipation. The seed iterate is
//! `(S₂u₀, S₂w₀)`, constant in time.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::lp::DyadicPartition;
use crate::state::State;

use super::config::SolverConfig;
use super::integrator::{initial_state, ExplicitTerms, Stepper};
use super::trajectory::Trajectory;

fn seeded_data(
    partition: &DyadicPartition,
    u0: &SpectralField,
    w0: &SpectralField,
    level: i32,
) -> Result<State> {
    let level = level.min(partition.j_max() + 1);
    State::new(partition.low_pass(u0, level)?, partition.low_pass(w0, level)?, 0.0)
}

/// Iterate 1: `(S₂u₀, S₂w₀)` at every stored time.
pub fn seed_iterate(u0: &SpectralField, w0: &SpectralField, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let partition = DyadicPartition::shared(cfg.grid()?)?;
    initial_state(u0, w0, cfg)?;
    let seed = seeded_data(&partition, u0, w0, 2)?;
    let states = cfg
        .stored_steps()
        .into_iter()
        .map(|i| State {
            t: i as f64 * cfg.dt,
            ..seed.clone()
        })
        .collect();
    Trajectory::new(&partition, states)
}

/// Iterate `n+1` from iterate `n` (`prev`).
pub fn picard_step(
    prev: &Trajectory,
    u0: &SpectralField,
    w0: &SpectralField,
    n: usize,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    if prev.first().grid() != &grid {
        return Err(Error::Config("previous iterate lives on a different grid".into()));
    }
    let stored = cfg.stored_steps();
    let expected: Vec<f64> = stored.iter().map(|&i| i as f64 * cfg.dt).collect();
    let times = prev.times();
    if times.len() != expected.len()
        || times.iter().zip(&expected).any(|(a, b)| (a - b).abs() > 1e-12 * b.max(1.0))
    {
        return Err(Error::Config(format!(
            "previous iterate has horizon {} with {} stored states; config expects {} with {}",
            prev.horizon(),
            times.len(),
            cfg.effective_horizon(),
            expected.len()
        )));
    }
    initial_state(u0, w0, cfg)?;
    let partition = DyadicPartition::shared(grid)?;
    let mut state = seeded_data(&partition, u0, w0, n as i32 + 1)?;
    let stepper = Stepper::from_config(cfg)?;
    let terms = ExplicitTerms::from_config(cfg);
    let mut states = Vec::with_capacity(stored.len());
    states.push(state.clone());
    let mut next_store = 1;
    for step in 1..=cfg.steps() {
        state = stepper.step(&state, |s| {
            let frozen = prev.sample(s.t);
            terms.evaluate(&frozen.u, &frozen, s)
        })?;
        state.t = step as f64 * cfg.dt;
        if stored[next_store] == step {
            states.push(state.clone());
            next_store += 1;
        }
    }
    Trajectory::new(&partition, states)
}

/// Outcome of a Picard run. `diffs[i]` compares iterates `i+1` and `i+2`.
#[derive(Clone, Debug)]
pub struct PicardRun {
    pub iterates: Vec<Trajectory>,
    pub converged: bool,
    pub diffs: Vec<f64>,
    pub diff_parts: Vec<IterateDiff>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IterateDiff {
    pub u: f64,
    pub w: f64,
}

impl IterateDiff {
    pub fn total(&self) -> f64 {
        self.u + self.w
    }
}

/// Iterate until `sup_t‖Δu‖ + sup_t‖Δw‖ < cauchy_tol` or `max_picard_iters`
/// iterates exist. Non-convergence is reported, not raised.
pub fn run_picard(u0: &SpectralField, w0: &SpectralField, cfg: &SolverConfig) -> Result<PicardRun> {
    let mut iterates = vec![seed_iterate(u0, w0, cfg)?];
    let mut diffs = Vec::new();
    let mut diff_parts = Vec::new();
    let mut converged = false;
    while iterates.len() < cfg.max_picard_iters {
        let n = iterates.len();
        let next = picard_step(&iterates[n - 1], u0, w0, n, cfg)?;
        let (u, w) = next.sup_distance(&iterates[n - 1])?;
        let diff = IterateDiff { u, w };
        iterates.push(next);
        diffs.push(diff.total());
        diff_parts.push(diff);
        if diff.total() < cfg.cauchy_tol {
            converged = true;
            break;
        }
    }
    Ok(PicardRun {
        iterates,
        converged,
        diffs,
        diff_parts,
    })
}

impl PicardRun {
    pub fn final_iterate(&self) -> &Trajectory {
        self.iterates.last().expect("a run holds at least the seed iterate")
    }
}
