use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::ops;

/// Which existence regime a configuration targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremMode {
    /// Fractional dissipation on both fields, `alpha >= 1/2`, `beta >= 1/2`.
    Theorem1,
    /// No diffusion on the microrotation, `alpha >= 1`, `beta = 0`.
    Theorem2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub nu: f64,
    pub k: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PhysicalParams {
    pub fn validate(&self, mode: TheoremMode, exploratory: bool) -> Result<()> {
        for (name, v) in [
            ("nu", self.nu),
            ("k", self.k),
            ("gamma", self.gamma),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        for (name, v) in [("nu", self.nu), ("k", self.k), ("gamma", self.gamma)] {
            if v < 0.0 {
                return Err(Error::Config(format!("{name} must be >= 0, got {v}")));
            }
        }
        if self.alpha < 0.0 || self.beta < 0.0 {
            return Err(Error::Config("dissipation exponents must be >= 0".into()));
        }
        if exploratory {
            return Ok(());
        }
        match mode {
            TheoremMode::Theorem1 => {
                if self.alpha < 0.5 {
                    return Err(Error::Config(format!(
                        "theorem1 requires alpha >= 1/2 (got {})",
                        self.alpha
                    )));
                }
                if self.beta < 0.5 {
                    return Err(Error::Config(format!(
                        "theorem1 requires beta >= 1/2 (got {})",
                        self.beta
                    )));
                }
            }
            TheoremMode::Theorem2 => {
                if self.alpha < 1.0 {
                    return Err(Error::Config(format!(
                        "theorem2 requires alpha >= 1 (got {})",
                        self.alpha
                    )));
                }
                if self.beta != 0.0 {
                    return Err(Error::Config(format!(
                        "theorem2 requires beta = 0 (got {})",
                        self.beta
                    )));
                }
            }
        }
        Ok(())
    }

    /// Critical regularity of the velocity, `1 + d/2 - 2 alpha`.
    pub fn velocity_index(&self, d: usize) -> f64 {
        1.0 + d as f64 / 2.0 - 2.0 * self.alpha
    }

    /// Regularity of the microrotation sup-norm: `1 + d/2 - 2 beta` in
    /// theorem1 mode, `d/2` in theorem2 mode.
    pub fn microrotation_index(&self, d: usize, mode: TheoremMode) -> f64 {
        match mode {
            TheoremMode::Theorem1 => 1.0 + d as f64 / 2.0 - 2.0 * self.beta,
            TheoremMode::Theorem2 => d as f64 / 2.0,
        }
    }
}

/// Velocity and microrotation at one instant. Pressure is not stored; see
/// [`ops::recover_pressure`].
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub u: SpectralField,
    pub w: SpectralField,
    pub t: f64,
}

impl State {
    pub fn new(u: SpectralField, w: SpectralField, t: f64) -> Result<Self> {
        let grid = *u.grid();
        if w.grid() != &grid {
            return Err(Error::Config("u and w live on different grids".into()));
        }
        if u.components() != grid.d() {
            return Err(Error::Shape(format!(
                "velocity needs {} components, got {}",
                grid.d(),
                u.components()
            )));
        }
        if w.components() != grid.microrotation_components() {
            return Err(Error::Shape(format!(
                "microrotation needs {} components in {}D, got {}",
                grid.microrotation_components(),
                grid.d(),
                w.components()
            )));
        }
        Ok(State { u, w, t })
    }

    pub fn zeros(grid: Grid) -> Self {
        State {
            u: SpectralField::zeros(grid, grid.d()),
            w: SpectralField::zeros(grid, grid.microrotation_components()),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    /// `‖u‖² + ‖w‖²`.
    pub fn energy_sq(&self) -> f64 {
        self.u.norm_sq() + self.w.norm_sq()
    }

    /// Largest |∇·u| over the collocation grid.
    pub fn max_divergence(&self) -> f64 {
        ops::divergence(&self.u)
            .map(|f| f.max_abs_physical())
            .unwrap_or(f64::INFINITY)
    }

    pub fn has_non_finite(&self) -> bool {
        self.u.has_non_finite() || self.w.has_non_finite()
    }

    /// Sup-in-time L² distance helper: `‖u - u'‖ + ‖w - w'‖` at this instant.
    pub fn distance(&self, other: &State) -> (f64, f64) {
        ((&self.u - &other.u).l2_norm(), (&self.w - &other.w).l2_norm())
    }
}
