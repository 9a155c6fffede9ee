use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::random::SpectrumProfile;
use crate::state::{PhysicalParams, TheoremMode};

/// How the initial data of a run is produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    /// `u₀ = A(sin x₂, 0)`, `w₀ = A cos x₁` in 2D; in 3D
    /// `u₀ = A(sin x₂, sin x₃, sin x₁)`, `w₀ = A(cos x₁, cos x₂, cos x₃)`.
    SingleMode { amplitude: f64 },
    /// Seeded random data with the given spectrum; `u₀` is Leray-projected.
    Random { seed: u64, profile: SpectrumProfile },
    /// Read from an MPSF1 snapshot.
    Snapshot { path: String },
}

fn default_max_iters() -> usize {
    30
}
fn default_cauchy_tol() -> f64 {
    1e-9
}
fn default_stride() -> usize {
    1
}
fn default_c_fit() -> f64 {
    1.0
}

/// Solver settings; serialized as a flat JSON object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub d: usize,
    pub n: usize,
    #[serde(flatten)]
    pub params: PhysicalParams,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub dt: f64,
    pub mode: TheoremMode,
    #[serde(default = "default_max_iters")]
    pub max_picard_iters: usize,
    #[serde(default = "default_cauchy_tol")]
    pub cauchy_tol: f64,
    /// Skip the theorem-mode parameter checks.
    #[serde(default)]
    pub exploratory: bool,
    /// Keep every `store_stride`-th step (the final step is always kept).
    #[serde(default = "default_stride")]
    pub store_stride: usize,
    #[serde(default)]
    pub disable_advection: bool,
    #[serde(default)]
    pub disable_coupling: bool,
    /// Constant dividing the smallness budget in `select_parameters`.
    #[serde(default = "default_c_fit")]
    pub c_fit: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialData>,
}

impl SolverConfig {
    pub fn new(grid: Grid, params: PhysicalParams, mode: TheoremMode, horizon: f64, dt: f64) -> Self {
        SolverConfig {
            d: grid.d(),
            n: grid.n(),
            params,
            horizon,
            dt,
            mode,
            max_picard_iters: default_max_iters(),
            cauchy_tol: default_cauchy_tol(),
            exploratory: false,
            store_stride: 1,
            disable_advection: false,
            disable_coupling: false,
            c_fit: 1.0,
            initial: None,
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.d, self.n)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.params.validate(self.mode, self.exploratory)?;
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be > 0 (got {})", self.dt)));
        }
        if !(self.horizon >= self.dt) || !self.horizon.is_finite() {
            return Err(Error::Config(format!(
                "T must be >= dt (got T = {}, dt = {})",
                self.horizon, self.dt
            )));
        }
        if self.max_picard_iters < 2 {
            return Err(Error::Config("max_picard_iters must be >= 2".into()));
        }
        if !(self.cauchy_tol > 0.0) {
            return Err(Error::Config("cauchy_tol must be > 0".into()));
        }
        if self.store_stride == 0 {
            return Err(Error::Config("store_stride must be >= 1".into()));
        }
        if !(self.c_fit > 0.0) {
            return Err(Error::Config("c_fit must be > 0".into()));
        }
        Ok(())
    }

    /// Number of steps; `T` is rounded down to a whole number of steps.
    pub fn steps(&self) -> usize {
        ((self.horizon / self.dt) * (1.0 + 1e-12)).floor().max(1.0) as usize
    }

    /// The horizon actually integrated, `steps · dt`.
    pub fn effective_horizon(&self) -> f64 {
        self.steps() as f64 * self.dt
    }

    /// Indices of the steps that are stored.
    pub fn stored_steps(&self) -> Vec<usize> {
        let steps = self.steps();
        let mut out: Vec<usize> = (0..=steps).step_by(self.store_stride).collect();
        if *out.last().expect("step 0 is always stored") != steps {
            out.push(steps);
        }
        out
    }

    pub fn with_horizon(&self, horizon: f64) -> Self {
        SolverConfig {
            horizon,
            ..self.clone()
        }
    }

    pub fn with_dt(&self, dt: f64) -> Self {
        SolverConfig { dt, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SolverConfig {
        let p = PhysicalParams {
            nu: 1.0,
            k: 0.1,
            gamma: 1.0,
            alpha: 1.0,
            beta: 1.0,
        };
        SolverConfig::new(Grid::new(2, 16).unwrap(), p, TheoremMode::Theorem1, 0.1, 1e-3)
    }

    #[test]
    fn steps_round_down_to_whole_steps() {
        let c = cfg();
        assert_eq!(c.steps(), 100);
        assert_eq!(c.with_horizon(0.0125).steps(), 12);
        assert_eq!(c.with_horizon(0.0005).with_dt(1e-3).steps(), 1);
    }

    #[test]
    fn stored_steps_keep_the_last_one() {
        let mut c = cfg().with_horizon(0.01);
        c.store_stride = 3;
        assert_eq!(c.stored_steps(), vec![0, 3, 6, 9, 10]);
    }

    #[test]
    fn validation_rejects_bad_steps() {
        assert!(cfg().validate().is_ok());
        assert!(matches!(cfg().with_dt(0.0).validate(), Err(Error::Config(_))));
        assert!(matches!(cfg().with_horizon(1e-4).validate(), Err(Error::Config(_))));
    }
}
