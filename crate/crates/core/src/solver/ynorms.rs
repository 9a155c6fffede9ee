//! Working-space bookkeeping: sup-in-time critical norms bounded by `M` and
//! time-integrated smooth norms bounded by `δ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::lp::besov::combine_blocks;
use crate::lp::DyadicPartition;
use crate::state::{PhysicalParams, TheoremMode};

use super::config::SolverConfig;
use super::trajectory::{trapezoid, Trajectory};

/// Regularity indices of the four working-space norms (all `B^s_{2,1}`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YIndices {
    pub u_sup: f64,
    pub u_int: f64,
    pub w_sup: f64,
    pub w_int: f64,
}

impl YIndices {
    pub fn new(d: usize, params: &PhysicalParams, mode: TheoremMode) -> Self {
        let smooth = 1.0 + d as f64 / 2.0;
        let w_sup = params.microrotation_index(d, mode);
        YIndices {
            u_sup: params.velocity_index(d),
            u_int: smooth,
            w_sup,
            w_int: match mode {
                TheoremMode::Theorem1 => smooth,
                TheoremMode::Theorem2 => w_sup,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YNorms {
    pub u_sup: f64,
    pub w_sup: f64,
    pub u_int: f64,
    pub w_int: f64,
}

pub fn compute_y_norms(traj: &Trajectory, params: &PhysicalParams, mode: TheoremMode) -> YNorms {
    let idx = YIndices::new(traj.first().grid().d(), params, mode);
    let times = traj.times();
    let series = |f: &dyn Fn(&super::trajectory::BlockNorms) -> f64| -> Vec<f64> {
        traj.block_norms().iter().map(f).collect()
    };
    let u_sup = series(&|b| combine_blocks(&b.u, idx.u_sup, 1.0));
    let w_sup = series(&|b| combine_blocks(&b.w, idx.w_sup, 1.0));
    let u_int = series(&|b| combine_blocks(&b.u, idx.u_int, 1.0));
    let w_int = series(&|b| combine_blocks(&b.w, idx.w_int, 1.0));
    let max = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    YNorms {
        u_sup: max(&u_sup),
        w_sup: max(&w_sup),
        u_int: trapezoid(&times, &u_int),
        w_int: trapezoid(&times, &w_int),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct YBounds {
    #[serde(rename = "M")]
    pub m: f64,
    pub delta: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
}

/// Which condition fixed a selected parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    /// `δ = 1/(4 c_fit)`
    Quarter,
    /// `δ = M/(4 c_fit)`
    QuarterM,
    /// The configured horizon already satisfied every condition.
    Horizon,
    SeedVelocity,
    SeedMicrorotation,
    Tail,
    /// Zero data; nothing to bound.
    ZeroData,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterChoice {
    #[serde(flatten)]
    pub bounds: YBounds,
    pub zero_data: bool,
    pub c_fit: f64,
    pub delta_binding: Binding,
    /// Conditions that failed at the last rejected horizon.
    pub horizon_binding: Vec<Binding>,
    /// `T ‖S₂u₀‖_{B^{1+d/2}}` at the selected `T`.
    pub seed_velocity: f64,
    pub seed_microrotation: f64,
    /// `Σ_j 2^{(1+d/2−2α)j}(1 − e^{−c₀2^{2αj}T})‖Δ_j u₀‖` at the selected `T`.
    pub tail: f64,
}

/// `Σ_j 2^{s j}(1 − e^{−c₀ 2^{2αj} T}) b_j` over block norms `b`.
pub fn tail_functional(blocks: &[f64], s: f64, c0: f64, alpha: f64, horizon: f64) -> f64 {
    blocks
        .iter()
        .enumerate()
        .map(|(slot, b)| {
            let j = slot as f64 - 1.0;
            let rate = c0 * (2.0 * alpha * j).exp2();
            (s * j).exp2() * (-(-rate * horizon).exp_m1()) * b
        })
        .sum()
}

/// `M = 2(‖u₀‖_{B^{s_u}} + ‖w₀‖_{B^{s_w}})`, `δ = min(1/4, M/4)/c_fit`, and
/// the largest `T = horizon/2^m` meeting the seed and tail conditions.
pub fn select_parameters(
    u0: &SpectralField,
    w0: &SpectralField,
    cfg: &SolverConfig,
) -> Result<ParameterChoice> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let partition = DyadicPartition::shared(grid)?;
    if u0.grid() != &grid || w0.grid() != &grid {
        return Err(Error::Config("initial data and config use different grids".into()));
    }
    let norms = [u0, w0].map(|f| partition.block_l2_norms(f));
    if norms.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Domain("initial data has non-finite norms".into()));
    }
    let idx = YIndices::new(grid.d(), &cfg.params, cfg.mode);
    let m = 2.0 * (combine_blocks(&norms[0], idx.u_sup, 1.0) + combine_blocks(&norms[1], idx.w_sup, 1.0));
    if u0.max_abs_coeff() == 0.0 && w0.max_abs_coeff() == 0.0 {
        return Ok(ParameterChoice {
            bounds: YBounds {
                m: 0.0,
                delta: 0.25 / cfg.c_fit,
                horizon: cfg.horizon,
            },
            zero_data: true,
            c_fit: cfg.c_fit,
            delta_binding: Binding::ZeroData,
            horizon_binding: vec![Binding::ZeroData],
            seed_velocity: 0.0,
            seed_microrotation: 0.0,
            tail: 0.0,
        });
    }
    let (delta, delta_binding) = if m / 4.0 < 0.25 {
        (m / 4.0 / cfg.c_fit, Binding::QuarterM)
    } else {
        (0.25 / cfg.c_fit, Binding::Quarter)
    };
    let seed_u = combine_blocks(&partition.block_l2_norms(&partition.low_pass(u0, 2)?), idx.u_int, 1.0);
    let seed_w = combine_blocks(&partition.block_l2_norms(&partition.low_pass(w0, 2)?), idx.w_int, 1.0);
    let p = &cfg.params;
    let c0 = (p.nu + p.k) * (0.75f64).powf(2.0 * p.alpha);
    let check = |t: f64| {
        let tail = tail_functional(&norms[0], idx.u_sup, c0, p.alpha, t);
        let mut failed = Vec::new();
        if t * seed_u > delta {
            failed.push(Binding::SeedVelocity);
        }
        if t * seed_w > delta {
            failed.push(Binding::SeedMicrorotation);
        }
        if tail > delta / 4.0 {
            failed.push(Binding::Tail);
        }
        (failed, tail)
    };
    let mut horizon = cfg.horizon;
    let mut binding = vec![Binding::Horizon];
    loop {
        let (failed, tail) = check(horizon);
        if failed.is_empty() {
            return Ok(ParameterChoice {
                bounds: YBounds { m, delta, horizon },
                zero_data: false,
                c_fit: cfg.c_fit,
                delta_binding,
                horizon_binding: binding,
                seed_velocity: horizon * seed_u,
                seed_microrotation: horizon * seed_w,
                tail,
            });
        }
        binding = failed;
        horizon /= 2.0;
        if horizon < 4.0 * cfg.dt {
            return Err(Error::Config(format!(
                "no admissible T at this resolution (conditions {binding:?} still fail below 4 dt = {})",
                4.0 * cfg.dt
            )));
        }
    }
}
