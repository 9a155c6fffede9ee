use serde::Serialize;

use crate::error::Result;
use crate::field::SpectralField;
use crate::random::{random_field, random_solenoidal, SpectrumProfile};
use crate::solver::trajectory::cumulative_trapezoid;
use crate::solver::{direct_solve, SolverConfig, Trajectory};
use crate::state::TheoremMode;

use super::gronwall::EnvelopeSeries;

/// Twin-solve outcome. `raw_rate` is the Gronwall rate before the constant;
/// `alternate_rate` uses `‖w‖²` at `1 + d/2 − 2β` instead of `1 + d/2 − β`
/// (equal to `raw_rate` in theorem2 mode).
#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    pub series: EnvelopeSeries,
    pub raw_rate: Vec<f64>,
    pub alternate_rate: Vec<f64>,
    pub c: f64,
    /// Smallest constant that keeps this run inside its envelope.
    pub c_needed: f64,
    pub c_needed_alternate: f64,
    pub twins_identical: bool,
    pub perturbation_scale: f64,
    pub seed: u64,
}

/// `0.1 + dt²`
pub fn envelope_slack(dt: f64) -> f64 {
    0.1 + dt * dt
}

fn gronwall_rate(traj: &Trajectory, cfg: &SolverConfig, w_index: f64) -> Vec<f64> {
    if cfg.disable_advection {
        return vec![0.0; traj.len()];
    }
    let smooth = 1.0 + cfg.d as f64 / 2.0;
    traj.block_norms()
        .iter()
        .map(|b| b.u_besov(smooth) + b.w_besov(w_index).powi(2))
        .collect()
}

/// Minimal `c` with `D(t) ≤ D(0) exp(c ∫₀ᵗ C)(1 + slack)` for all `t`.
pub fn required_constant(times: &[f64], raw_rate: &[f64], observed: &[f64], slack: f64) -> f64 {
    let d0 = observed.first().copied().unwrap_or(0.0);
    if d0 == 0.0 {
        return if observed.iter().all(|&d| d == 0.0) { 0.0 } else { f64::INFINITY };
    }
    let integral = cumulative_trapezoid(times, raw_rate);
    observed
        .iter()
        .zip(&integral)
        .map(|(&d, &i)| {
            let excess = (d / (d0 * (1.0 + slack))).ln();
            if excess <= 0.0 {
                0.0
            } else if i > 0.0 {
                excess / i
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max)
}

/// One constant for a corpus of runs: the largest per-run requirement.
pub fn fit_gronwall_constant(reports: &[UniquenessReport]) -> f64 {
    reports.iter().map(|r| r.c_needed).fold(0.0, f64::max)
}

fn perturbation(grid: crate::grid::Grid, scale: f64, seed: u64) -> (SpectralField, SpectralField) {
    let profile = SpectrumProfile {
        amplitude: scale,
        ..Default::default()
    };
    (
        random_solenoidal(grid, &profile, seed),
        random_field(grid, grid.microrotation_components(), &profile, seed.wrapping_add(1), true),
    )
}

/// Solve from `(u0, w0)` and from a seeded perturbation of L² size
/// `perturbation_scale` in each field, and compare `D(t) = ‖ũ‖² + ‖w̃‖²`
/// with `D(0) exp(c ∫ C)`. With `c = None` the run's own requirement is used.
pub fn uniqueness_experiment(
    u0: &SpectralField,
    w0: &SpectralField,
    perturbation_scale: f64,
    cfg: &SolverConfig,
    seed: u64,
    c: Option<f64>,
) -> Result<UniquenessReport> {
    let grid = cfg.grid()?;
    let (du, dw) = perturbation(grid, perturbation_scale, seed);
    let (u1, w1) = if perturbation_scale == 0.0 {
        (u0.clone(), w0.clone())
    } else {
        (u0 + &du, w0 + &dw)
    };
    let (reference, twin) = rayon::join(|| direct_solve(u0, w0, cfg), || direct_solve(&u1, &w1, cfg));
    let (reference, twin) = (reference?, twin?);
    let twins_identical = reference
        .states()
        .iter()
        .zip(twin.states())
        .all(|(a, b)| a == b);
    let times = reference.times();
    let observed: Vec<f64> = reference
        .states()
        .iter()
        .zip(twin.states())
        .map(|(a, b)| (&a.u - &b.u).norm_sq() + (&a.w - &b.w).norm_sq())
        .collect();
    let d = cfg.d as f64;
    let (primary, alternate) = match cfg.mode {
        TheoremMode::Theorem1 => (1.0 + d / 2.0 - cfg.params.beta, 1.0 + d / 2.0 - 2.0 * cfg.params.beta),
        TheoremMode::Theorem2 => (d / 2.0, d / 2.0),
    };
    let raw_rate = gronwall_rate(&reference, cfg, primary);
    let alternate_rate = gronwall_rate(&reference, cfg, alternate);
    let slack = envelope_slack(cfg.dt);
    let c_needed = required_constant(&times, &raw_rate, &observed, slack);
    let c_needed_alternate = required_constant(&times, &alternate_rate, &observed, slack);
    let c = c.unwrap_or(c_needed);
    let rate: Vec<f64> = raw_rate.iter().map(|r| c * r).collect();
    let series = EnvelopeSeries::new(times, rate, observed, slack)?;
    Ok(UniquenessReport {
        series,
        raw_rate,
        alternate_rate,
        c,
        c_needed,
        c_needed_alternate,
        twins_identical,
        perturbation_scale,
        seed,
    })
}
